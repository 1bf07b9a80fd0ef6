//! SVG rendering of a data register as a binary tree of Bloch spheres.
//!
//! Depth `d` is drawn as a row of `2^d` spheres. Each sphere shows one point
//! per sample, colored from blue (first sample) to red (last sample).

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::register::{BlochCoord, DataRegister, TreeCoord};

/// Largest qubit count accepted by [`render_svg`] (255 spheres).
pub const MAX_RENDER_QUBITS: usize = 8;

/// Camera elevation above the equator, degrees.
pub const VIEW_ELEVATION_DEG: f64 = 20.0;
/// Camera azimuth from +x toward +y, degrees.
pub const VIEW_AZIMUTH_DEG: f64 = 20.0;

pub const HIDDEN_OPACITY: f64 = 0.35;
const MARGIN_PX: f64 = 24.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderSpec {
    pub sphere_radius_px: u32,
    pub h_gap_px: u32,
    pub v_gap_px: u32,
    pub point_radius_px: u32,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            sphere_radius_px: 60,
            h_gap_px: 20,
            v_gap_px: 40,
            point_radius_px: 3,
        }
    }
}

/// Orthographic camera with Z drawn vertically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    right: [f64; 3],
    up: [f64; 3],
    toward_viewer: [f64; 3],
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

impl Projection {
    pub fn new(elevation_deg: f64, azimuth_deg: f64) -> Self {
        let (se, ce) = elevation_deg.to_radians().sin_cos();
        let (sa, ca) = azimuth_deg.to_radians().sin_cos();
        Projection {
            right: [-sa, ca, 0.0],
            up: [-se * ca, -se * sa, ce],
            toward_viewer: [ce * ca, ce * sa, se],
        }
    }

    pub fn standard() -> Self {
        Self::new(VIEW_ELEVATION_DEG, VIEW_AZIMUTH_DEG)
    }

    /// Screen offsets `(dx, dy)` in units of the sphere radius (y grows
    /// downward) and whether the point faces the viewer.
    pub fn project(&self, p: [f64; 3]) -> (f64, f64, bool) {
        (
            dot(p, self.right),
            -dot(p, self.up),
            dot(p, self.toward_viewer) >= 0.0,
        )
    }
}

/// Sample `i` of `m` on the linear blue → red ramp.
pub fn sample_color(i: usize, m: usize) -> (u8, u8, u8) {
    let f = if m <= 1 {
        0.0
    } else {
        i as f64 / (m - 1) as f64
    };
    let red = (255.0 * f).round() as u8;
    let blue = (255.0 * (1.0 - f)).round() as u8;
    (red, 0, blue)
}

/// Pixel layout of the tree.
#[derive(Debug, Clone, Copy)]
struct Layout {
    radius: f64,
    row_width: f64,
    row_pitch: f64,
    width: f64,
    height: f64,
}

impl Layout {
    fn new(n_qubits: usize, spec: &RenderSpec) -> Self {
        let radius = spec.sphere_radius_px as f64;
        let leaves = (1usize << (n_qubits - 1)) as f64;
        let row_width = leaves * (2.0 * radius + spec.h_gap_px as f64);
        let row_pitch = 2.0 * radius + spec.v_gap_px as f64;
        let n = n_qubits as f64;
        Layout {
            radius,
            row_width,
            row_pitch,
            width: row_width + 2.0 * MARGIN_PX,
            height: 2.0 * MARGIN_PX + n * 2.0 * radius + (n - 1.0) * spec.v_gap_px as f64,
        }
    }

    fn center(&self, coord: &TreeCoord) -> (f64, f64) {
        let d = coord.depth();
        let j = coord.heap_index() - (1usize << d);
        let slot = self.row_width / (1usize << d) as f64;
        let cx = MARGIN_PX + (j as f64 + 0.5) * slot;
        let cy = MARGIN_PX + self.radius + d as f64 * self.row_pitch;
        (cx, cy)
    }
}

/// Renders every node of `register` as a Bloch sphere.
pub fn render_svg(register: &DataRegister, spec: &RenderSpec) -> Result<String> {
    let n = register.n_qubits();
    if n > MAX_RENDER_QUBITS {
        return Err(Error::Render(format!(
            "{n} qubits exceeds the rendering limit of {MAX_RENDER_QUBITS}"
        )));
    }
    if spec.sphere_radius_px == 0 || spec.point_radius_px == 0 {
        return Err(Error::Render(
            "sphere and point radius must be positive".into(),
        ));
    }
    let layout = Layout::new(n, spec);
    let proj = Projection::standard();
    let m = register.n_samples();

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif" font-size="11">"#,
        w = layout.width.ceil(),
        h = layout.height.ceil()
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (coord, coords) in register.iter() {
        write_sphere(&mut svg, &layout, &proj, spec, &coord, coords, m);
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn write_sphere(
    svg: &mut String,
    layout: &Layout,
    proj: &Projection,
    spec: &RenderSpec,
    coord: &TreeCoord,
    coords: &[BlochCoord],
    m: usize,
) {
    let (cx, cy) = layout.center(coord);
    let r = layout.radius;
    let equator_ry = r * VIEW_ELEVATION_DEG.to_radians().sin();
    let _ = writeln!(svg, r#"<g class="sphere" data-coord="{coord}">"#);
    let _ = writeln!(
        svg,
        r##"<circle class="outline" cx="{cx:.3}" cy="{cy:.3}" r="{r:.3}" fill="none" stroke="#444" stroke-width="1"/>"##
    );
    let _ = writeln!(
        svg,
        r##"<ellipse class="equator" cx="{cx:.3}" cy="{cy:.3}" rx="{r:.3}" ry="{equator_ry:.3}" fill="none" stroke="#999" stroke-dasharray="4 3"/>"##
    );
    for (class, axis) in [("axis-z", [0.0, 0.0, 1.0]), ("axis-x", [1.0, 0.0, 0.0])] {
        let (x1, y1, _) = proj.project(axis);
        let (x0, y0, _) = proj.project([-axis[0], -axis[1], -axis[2]]);
        let _ = writeln!(
            svg,
            r##"<line class="{class}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#bbb"/>"##,
            cx + r * x0,
            cy + r * y0,
            cx + r * x1,
            cy + r * y1
        );
    }
    let _ = writeln!(
        svg,
        r#"<text class="label" x="{cx:.3}" y="{:.3}" text-anchor="middle">|0⟩</text>"#,
        cy - r - 4.0
    );
    let _ = writeln!(
        svg,
        r#"<text class="label" x="{cx:.3}" y="{:.3}" text-anchor="middle">|1⟩</text>"#,
        cy + r + 12.0
    );
    let name = if coord.depth() == 0 {
        "root"
    } else {
        coord.as_str()
    };
    let _ = writeln!(
        svg,
        r##"<text class="coord" x="{:.3}" y="{:.3}" fill="#666">{name}</text>"##,
        cx + r * 0.75,
        cy - r * 0.85
    );
    for (i, c) in coords.iter().enumerate() {
        let (dx, dy, visible) = proj.project(c.to_cartesian());
        let (red, green, blue) = sample_color(i, m);
        let opacity = if visible { 1.0 } else { HIDDEN_OPACITY };
        let _ = writeln!(
            svg,
            r#"<circle class="point" data-sample="{i}" cx="{:.3}" cy="{:.3}" r="{}" fill="rgb({red},{green},{blue})" fill-opacity="{opacity}"/>"#,
            cx + r * dx,
            cy + r * dy,
            spec.point_radius_px
        );
    }
    svg.push_str("</g>\n");
}
