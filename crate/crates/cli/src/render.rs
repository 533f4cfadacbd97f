//! SVG output for attractor trees.
//!
//! Positions live in `M_R`; the picture shows the first two coordinates.
//! Everything stays exact until the final affine map to pixels, where each
//! coordinate is rounded to the nearest integer. That rounding is
//! presentation only.

use std::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use quiver_dt::flowtree::{AttractorChild, AttractorMap, AttractorTree};
use quiver_dt::quiver::{contract, Covector, DimVec, SkewForm};

const PANEL: i64 = 360;
const MARGIN: i64 = 40;

type Point = (BigRational, BigRational);

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn project(c: &Covector) -> Point {
    let e = c.entries();
    (e[0].clone(), e.get(1).cloned().unwrap_or_default())
}

fn round(x: &BigRational) -> BigInt {
    (x + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

struct Segment {
    from: Point,
    to: Point,
    arrow: bool,
    label: Option<String>,
}

fn segments(tree: &AttractorTree, parts: &[DimVec], omega: &SkewForm) -> Vec<Segment> {
    let pts: Vec<Point> = tree.vertices.iter().map(|v| project(&v.position)).collect();
    let root = project(&tree.root);
    let mut all = vec![root.clone()];
    all.extend(pts.iter().cloned());
    let extent = |f: fn(&Point) -> &BigRational| {
        let lo = all.iter().map(f).min().expect("nonempty").clone();
        let hi = all.iter().map(f).max().expect("nonempty").clone();
        hi - lo
    };
    let mut size = extent(|p| &p.0).max(extent(|p| &p.1));
    if size.is_zero() {
        size = q(1);
    }
    let leg_len = size / q(3);

    let mut out = vec![Segment {
        from: root,
        to: pts[0].clone(),
        arrow: false,
        label: None,
    }];
    for (v, vert) in tree.vertices.iter().enumerate() {
        for c in &vert.children {
            match *c {
                AttractorChild::Vertex(w) => out.push(Segment {
                    from: pts[v].clone(),
                    to: pts[w].clone(),
                    arrow: false,
                    label: None,
                }),
                AttractorChild::Leaf(i) => {
                    let dir = contract(omega, &parts[i]);
                    let (dx, dy) = (q(dir[0]), q(dir.get(1).copied().unwrap_or(0)));
                    let norm = dx.abs().max(dy.abs());
                    let (dx, dy) = if norm.is_zero() {
                        (q(0), q(0))
                    } else {
                        (&dx * &leg_len / &norm, &dy * &leg_len / &norm)
                    };
                    let from = pts[v].clone();
                    let to = (&from.0 + dx, &from.1 + dy);
                    out.push(Segment {
                        from,
                        to,
                        arrow: true,
                        label: Some(format!("γ{}={}", i + 1, parts[i])),
                    });
                }
            }
        }
    }
    out
}

/// Affine map of the bounding box into a `PANEL`-sized square, y pointing up.
fn to_pixels(segs: &[Segment]) -> impl Fn(&Point) -> (BigInt, BigInt) {
    let pts: Vec<&Point> = segs.iter().flat_map(|s| [&s.from, &s.to]).collect();
    let min_x = pts.iter().map(|p| &p.0).min().expect("nonempty").clone();
    let max_x = pts.iter().map(|p| &p.0).max().expect("nonempty").clone();
    let min_y = pts.iter().map(|p| &p.1).min().expect("nonempty").clone();
    let max_y = pts.iter().map(|p| &p.1).max().expect("nonempty").clone();
    let mut span = (&max_x - &min_x).max(&max_y - &min_y);
    if span.is_zero() {
        span = q(1);
    }
    let k = q(PANEL - 2 * MARGIN) / span;
    move |p: &Point| {
        let x = q(MARGIN) + (&p.0 - &min_x) * &k;
        let y = q(PANEL - MARGIN) - (&p.1 - &min_y) * &k;
        (round(&x), round(&y))
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn svg(omega: &SkewForm, parts: &[DimVec], theta: &Covector, map: Option<&AttractorMap>) -> String {
    let groups: Vec<_> = map.map(|m| m.groups.iter().collect()).unwrap_or_default();
    let width = PANEL * (groups.len().max(1) as i64);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANEL}" viewBox="0 0 {width} {PANEL}">"#
    );
    s.push_str(concat!(
        r#"<defs><marker id="head" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" orient="auto">"#,
        r#"<path d="M0,0 L10,5 L0,10 z"/></marker></defs>"#,
        "\n"
    ));
    let theta_text: Vec<String> = theta.entries().iter().map(quiver_dt::json::format_rational).collect();
    let _ = writeln!(
        s,
        r#"<title>attractor trees at theta=({})</title>"#,
        escape(&theta_text.join(","))
    );
    for (n, (id, group)) in groups.iter().enumerate() {
        let segs = segments(&group.tree, parts, omega);
        let px = to_pixels(&segs);
        let _ = writeln!(
            s,
            r#"<g class="attractor-tree" data-id="{}" data-weight="{}" transform="translate({},0)" stroke="black" fill="none">"#,
            escape(id),
            group.weight(),
            PANEL * n as i64
        );
        let mut labels_at: std::collections::BTreeMap<(BigInt, BigInt), i64> = Default::default();
        for seg in &segs {
            let (x1, y1) = px(&seg.from);
            let (x2, y2) = px(&seg.to);
            let marker = if seg.arrow { r#" marker-end="url(#head)""# } else { "" };
            let _ = writeln!(s, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"{marker}/>"#);
            if let Some(label) = &seg.label {
                // Parallel legs end at the same pixel; stack their labels.
                let slot = labels_at.entry((x2.clone(), y2.clone())).or_default();
                let dy = 14 * *slot;
                *slot += 1;
                let _ = writeln!(
                    s,
                    r#"<text x="{}" y="{}" stroke="none" fill="black" font-size="12">{}</text>"#,
                    x2 + 4,
                    y2 - 4 + dy,
                    escape(label)
                );
            }
        }
        let (rx, ry) = px(&project(&group.tree.root));
        let _ = writeln!(s, r#"<circle cx="{rx}" cy="{ry}" r="3" fill="black"/>"#);
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_to_nearest() {
        assert_eq!(round(&BigRational::new(5.into(), 2.into())), BigInt::from(3));
        assert_eq!(round(&BigRational::new((-5).into(), 2.into())), BigInt::from(-2));
        assert_eq!(round(&BigRational::new(7.into(), 3.into())), BigInt::from(2));
    }
}
