//! Fan figures as plain SVG 1.1, drawn in the input cone's coordinates.

use std::fmt::Write;

use cqs_core::{v_rays, Error, Fan, Int, NVec, NormalForm, Rat, RatPoint, Result};
use num_traits::{Signed, ToPrimitive};

/// Fixed drawing constants.
#[derive(Debug, Clone, PartialEq)]
pub struct Style {
    /// Pixels per lattice unit.
    pub scale: u32,
    pub dot_radius: f64,
    pub dash: &'static str,
    pub ray_width: f64,
    pub roof_width: f64,
    pub font_size: u32,
    /// Refuse figures with more lattice dots than this.
    pub max_dots: u64,
}

pub const DEFAULT_SCALE: u32 = 40;

impl Default for Style {
    fn default() -> Self {
        Style {
            scale: DEFAULT_SCALE,
            dot_radius: 2.0,
            dash: "6,4",
            ray_width: 1.5,
            roof_width: 1.5,
            font_size: 12,
            max_dots: 250_000,
        }
    }
}

/// What to draw for one fan.
pub struct FanFigure<'a> {
    pub nf: &'a NormalForm,
    pub fan: &'a Fan,
    /// Draw the roof path. Off for the minimal resolution.
    pub roofs: bool,
    pub title: String,
}

struct Frame {
    xmin: Int,
    ymax: Int,
    width: Int,
    height: Int,
    scale: u32,
}

impl Frame {
    fn px(&self, p: &RatPoint) -> (f64, f64) {
        let s = Rat::from_integer(Int::from(self.scale));
        let x = (&p.x - Rat::from_integer(self.xmin.clone())) * &s;
        let y = (Rat::from_integer(self.ymax.clone()) - &p.y) * &s;
        (x.to_f64().unwrap_or(f64::NAN), y.to_f64().unwrap_or(f64::NAN))
    }

    fn lattice_px(&self, v: &NVec) -> (f64, f64) {
        self.px(&RatPoint::from_lattice(v))
    }
}

fn num(v: f64) -> String {
    // Two decimals, no negative zero.
    let s = format!("{:.2}", v);
    let s = if s == "-0.00" { "0.00".to_string() } else { s };
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn min_max(vals: &[&Int]) -> (Int, Int) {
    let lo = vals.iter().min().map(|v| (*v).clone()).unwrap_or_default();
    let hi = vals.iter().max().map(|v| (*v).clone()).unwrap_or_default();
    (lo, hi)
}

/// Renders one figure. Output depends only on the fan and the style.
pub fn render_fan(fig: &FanFigure<'_>, style: &Style) -> Result<String> {
    let nf = fig.nf;
    let g1 = nf.to_input(&nf.start_ray());
    let g2 = nf.to_input(&nf.end_ray());
    let zero = Int::from(0);
    let (xmin, xmax) = min_max(&[&zero, &g1.x, &g2.x]);
    let (ymin, ymax) = min_max(&[&zero, &g1.y, &g2.y]);
    let (xmin, xmax, ymin, ymax): (Int, Int, Int, Int) = (xmin - 1, xmax + 1, ymin - 1, ymax + 1);
    let width = &xmax - &xmin;
    let height = &ymax - &ymin;
    let dots = (&width + 1) * (&height + 1);
    if dots > Int::from(style.max_dots) {
        return Err(Error::ResourceGuard(format!(
            "figure for {nf} needs {dots} lattice dots, above the limit of {}",
            style.max_dots
        )));
    }
    let frame = Frame {
        xmin: xmin.clone(),
        ymax: ymax.clone(),
        width: width.clone(),
        height: height.clone(),
        scale: style.scale,
    };
    let w_px = &frame.width * style.scale;
    let h_px = &frame.height * style.scale;

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w_px}\" height=\"{h_px}\" viewBox=\"0 0 {w_px} {h_px}\">"
    );
    let _ = writeln!(s, "<title>{}</title>", escape(&fig.title));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");

    s.push_str("<g fill=\"#808080\">\n");
    let mut y = ymin.clone();
    while y <= ymax {
        let mut x = xmin.clone();
        while x <= xmax {
            let (cx, cy) = frame.lattice_px(&NVec::new(x.clone(), y.clone()));
            let _ = writeln!(s, "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>", num(cx), num(cy), num(style.dot_radius));
            x += 1;
        }
        y += 1;
    }
    s.push_str("</g>\n");

    let (ox, oy) = frame.lattice_px(&NVec::new(0, 0));
    let _ = writeln!(s, "<g stroke=\"#000000\" stroke-width=\"{}\">", num(style.ray_width));
    for ray in &fig.fan.rays {
        let (x, y) = frame.lattice_px(&nf.to_input(ray));
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            num(ox),
            num(oy),
            num(x),
            num(y)
        );
    }
    s.push_str("</g>\n");

    if fig.roofs && !fig.fan.cones.is_empty() {
        let mut pts = vec![nf.to_input_point(&fig.fan.cones[0].roof.start)];
        pts.extend(fig.fan.cones.iter().map(|c| nf.to_input_point(&c.roof.end)));
        let coords: Vec<String> = pts
            .iter()
            .map(|p| {
                let (x, y) = frame.px(p);
                format!("{},{}", num(x), num(y))
            })
            .collect();
        let _ = writeln!(
            s,
            "<polyline fill=\"none\" stroke=\"#000000\" stroke-width=\"{}\" stroke-dasharray=\"{}\" points=\"{}\"/>",
            num(style.roof_width),
            style.dash,
            coords.join(" ")
        );
    }

    // Rays of the minimal resolution are named v^0 .. v^{r+1}.
    let v = v_rays(nf)?;
    let _ = writeln!(s, "<g font-family=\"serif\" font-size=\"{}\" fill=\"#000000\">", style.font_size);
    for ray in &fig.fan.rays {
        let Some(i) = v.iter().position(|u| u == ray) else {
            continue;
        };
        let p = nf.to_input(ray);
        let (x, y) = frame.lattice_px(&p);
        // Nudge labels away from the origin side of the tip.
        let dx = if p.x.is_negative() { -14.0 } else { 4.0 };
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\">v<tspan dy=\"-5\" font-size=\"{}\">{i}</tspan></text>",
            num(x + dx),
            num(y - 6.0),
            style.font_size * 3 / 4
        );
    }
    s.push_str("</g>\n");
    s.push_str("</svg>\n");
    Ok(s)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use cqs_core::{minimal_resolution_fan, rdp_fan, InputCone, normalize_cone};

    fn y18() -> NormalForm {
        normalize_cone(&InputCone::new(NVec::new(-2, 3), NVec::new(4, 3)).unwrap()).unwrap()
    }

    #[test]
    fn num_formats_compactly() {
        assert_eq!(num(40.0), "40");
        assert_eq!(num(2.5), "2.5");
        assert_eq!(num(-0.001), "0");
        assert_eq!(num(13.333333), "13.33");
    }

    #[test]
    fn minimal_figure_has_no_roof() {
        let nf = y18();
        let fan = minimal_resolution_fan(&nf).unwrap();
        let svg = render_fan(
            &FanFigure { nf: &nf, fan: &fan, roofs: false, title: "min".into() },
            &Style::default(),
        )
        .unwrap();
        assert!(!svg.contains("stroke-dasharray"));
        assert_eq!(svg.matches("<line ").count(), 5);
        assert_eq!(svg.matches("<text ").count(), 5);
    }

    #[test]
    fn rdp_roof_passes_through_figure_points() {
        let nf = y18();
        let fan = rdp_fan(&nf).unwrap();
        let svg = render_fan(
            &FanFigure { nf: &nf, fan: &fan, roofs: true, title: "rdp".into() },
            &Style::default(),
        )
        .unwrap();
        // Box x in [-3,5], y in [-1,4]; roof (-2,3) (0,1) (1,1) (4,3).
        assert!(svg.contains("points=\"40,40 120,120 160,120 280,40\""), "{svg}");
        assert_eq!(svg.matches("<circle ").count(), 9 * 6);
    }

    #[test]
    fn guard_on_huge_figures() {
        let nf = NormalForm::from_nq(100_000, 3).unwrap();
        let fan = minimal_resolution_fan(&nf).unwrap();
        let err = render_fan(
            &FanFigure { nf: &nf, fan: &fan, roofs: false, title: String::new() },
            &Style::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::ResourceGuard(_)));
    }
}
