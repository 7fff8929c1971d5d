//! Affine slice {x >= 0, sum x = 1} of the weight space of a Euclidean
//! quiver with three or four vertices, drawn as SVG 1.1.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::quiver::{fmt_vec, DimVec, EulerContext};

const SIZE: f64 = 600.0;

/// Fixed images of the unit vectors. Four vertices are projected from the
/// tetrahedron; the positions avoid collinear quasi-simple images on the
/// built-in quivers.
fn anchors(n: usize) -> Result<Vec<(f64, f64)>> {
    match n {
        3 => Ok(vec![(300.0, 40.0), (40.0, 520.0), (560.0, 520.0)]),
        4 => Ok(vec![(300.0, 40.0), (60.0, 380.0), (540.0, 380.0), (300.0, 560.0)]),
        _ => Err(Error::Unsupported(format!("slice plots need 3 or 4 vertices, got {n}"))),
    }
}

fn project(anchors: &[(f64, f64)], d: &[i64]) -> (f64, f64) {
    let total: i64 = d.iter().sum();
    let t = total as f64;
    let x = d.iter().zip(anchors).map(|(&c, a)| c as f64 * a.0).sum::<f64>() / t;
    let y = d.iter().zip(anchors).map(|(&c, a)| c as f64 * a.1).sum::<f64>() / t;
    (x, y)
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Indices of the convex hull, counter-clockwise in screen coordinates,
/// collinear points dropped.
fn hull(points: &[(f64, f64)]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&i, &j| points[i].partial_cmp(&points[j]).expect("finite coordinates"));
    idx.dedup_by(|a, b| points[*a] == points[*b]);
    if idx.len() < 3 {
        return idx;
    }
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && cross(points[lower[lower.len() - 2]], points[lower[lower.len() - 1]], points[i]) <= 1e-9 {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && cross(points[upper[upper.len() - 2]], points[upper[upper.len() - 1]], points[i]) <= 1e-9 {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn pt(p: (f64, f64)) -> String {
    format!("{:.2},{:.2}", p.0, p.1)
}

pub fn slice_svg(ctx: &EulerContext) -> Result<String> {
    let delta = ctx.require_euclidean()?.clone();
    let n = ctx.n();
    let anchors = anchors(n)?;
    let reg = ctx.regular_structure()?;
    let qs: Vec<(usize, DimVec)> = reg
        .tubes
        .iter()
        .flat_map(|t| t.quasi_simples.iter().map(move |q| (t.index, q.clone())))
        .collect();

    let mut gens: Vec<DimVec> = qs.iter().map(|(_, q)| q.clone()).collect();
    gens.push(delta.clone());
    let projected: Vec<(f64, f64)> = gens.iter().map(|g| project(&anchors, g)).collect();
    let boundary = hull(&projected);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE:.0}" height="{SIZE:.0}" viewBox="0 0 {SIZE:.0} {SIZE:.0}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let _ = writeln!(s, r#"<g class="simplex" stroke="black" stroke-width="1" fill="none">"#);
    for i in 0..n {
        for j in i + 1..n {
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
                anchors[i].0, anchors[i].1, anchors[j].0, anchors[j].1
            );
        }
    }
    let _ = writeln!(s, "</g>");

    let poly: Vec<String> = boundary.iter().map(|&i| pt(projected[i])).collect();
    let _ = writeln!(
        s,
        r##"<polygon class="h-delta" points="{}" fill="#9ecae1" fill-opacity="0.5" stroke="#08519c" stroke-width="2"/>"##,
        poly.join(" ")
    );

    // facets: the cones spanned by delta and one quasi-simple per tube kept
    let _ = writeln!(s, r##"<g class="facets" stroke="#d94801" stroke-width="1" stroke-dasharray="4 3">"##);
    for (k, cone) in reg.f_cones.iter().enumerate() {
        let pts: Vec<(f64, f64)> = cone.generators().iter().map(|g| project(&anchors, g)).collect();
        let h = hull(&pts);
        let coords: Vec<String> = h.iter().map(|&i| pt(pts[i])).collect();
        let drops: Vec<String> = reg.drop_choices[k].iter().map(|d| d.to_string()).collect();
        let _ = writeln!(
            s,
            r#"<polygon class="facet" data-drop="{}" points="{}" fill="none"/>"#,
            drops.join(","),
            coords.join(" ")
        );
    }
    let _ = writeln!(s, "</g>");

    let colors = ["#e41a1c", "#4daf4a", "#984ea3", "#ff7f00", "#a65628"];
    for (k, (tube, q)) in qs.iter().enumerate() {
        let p = projected[k];
        let _ = writeln!(
            s,
            r#"<circle class="quasi-simple" data-tube="{}" cx="{:.2}" cy="{:.2}" r="6" fill="{}"/>"#,
            tube + 1,
            p.0,
            p.1,
            colors[tube % colors.len()]
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" font-family="monospace">{}</text>"#,
            p.0 + 8.0,
            p.1 - 8.0,
            fmt_vec(q)
        );
    }
    let pd = project(&anchors, &delta);
    let _ = writeln!(
        s,
        r#"<rect class="null-root" x="{:.2}" y="{:.2}" width="8" height="8" fill="black"/>"#,
        pd.0 - 4.0,
        pd.1 - 4.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" font-family="monospace">{}</text>"#,
        pd.0 + 8.0,
        pd.1 + 14.0,
        fmt_vec(&delta)
    );
    for (i, a) in anchors.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text class="vertex" x="{:.2}" y="{:.2}" font-size="13" font-family="monospace">e{}</text>"#,
            a.0 + 6.0,
            a.1 + 4.0,
            i + 1
        );
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}
