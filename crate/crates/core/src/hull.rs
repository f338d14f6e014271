//! Exact convex hulls and vertex enumeration in dimensions 1 to 3.
//!
//! Point sets here are small (tens of points), so facets are found by brute
//! force: every affinely independent `d`-subset spans a candidate hyperplane,
//! kept when all points lie on one side.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::rational::{self, Rational};
use crate::region::HalfSpace;

pub type Point = Vec<Rational>;

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).fold(Rational::zero(), |s, t| s + t)
}

fn diff(a: &[Rational], b: &[Rational]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Normal of the hyperplane through `pts` (exactly `d` points in `R^d`), or
/// `None` when they are affinely dependent.
fn normal_through(pts: &[&Point]) -> Option<Point> {
    let d = pts[0].len();
    let n = match d {
        1 => vec![Rational::from_integer(1)],
        2 => {
            let v = diff(pts[1], pts[0]);
            vec![-v[1], v[0]]
        }
        3 => {
            let u = diff(pts[1], pts[0]);
            let v = diff(pts[2], pts[0]);
            vec![u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
        }
        _ => return None,
    };
    (!n.iter().all(Zero::is_zero)).then_some(n)
}

/// `a . x <= b` scaled so `a` is a primitive integer vector.
pub fn normalized(a: &[Rational], b: Rational) -> HalfSpace {
    let prim = rational::primitive_direction(a);
    let idx = a.iter().position(|x| !x.is_zero()).expect("nonzero normal");
    let scale = prim[idx] / a[idx];
    HalfSpace { a: prim, b: b * scale }
}

/// Rank of a set of rational vectors.
pub fn rank(vectors: &[&Point]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let width = first.len();
    let mut rows: Vec<Point> = vectors.iter().map(|v| v.to_vec()).collect();
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            if !row[c].is_zero() {
                let f = row[c] / pivot[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= f * y;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Facets and vertices of a polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hull {
    pub facets: Vec<HalfSpace>,
    pub vertices: Vec<Point>,
}

fn subsets(n: usize, d: usize, out: &mut Vec<Vec<usize>>) {
    crate::codebook::for_each_subset(n, d, &mut |s| {
        out.push(s.to_vec());
        true
    });
}

/// Hull of a full-dimensional point set in `R^d`, `1 <= d <= 3`.
pub fn convex_hull(points: &[Point]) -> Hull {
    let pts: Vec<Point> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let d = pts.first().map_or(0, Vec::len);
    let mut facets: BTreeSet<HalfSpace> = BTreeSet::new();
    if d == 1 {
        let lo = pts.iter().map(|p| p[0]).min().unwrap();
        let hi = pts.iter().map(|p| p[0]).max().unwrap();
        facets.insert(normalized(&[Rational::from_integer(-1)], -lo));
        facets.insert(normalized(&[Rational::from_integer(1)], hi));
    } else {
        let mut combos = Vec::new();
        subsets(pts.len(), d, &mut combos);
        for combo in combos {
            let chosen: Vec<&Point> = combo.iter().map(|&i| &pts[i]).collect();
            let Some(normal) = normal_through(&chosen) else {
                continue;
            };
            let b = dot(&normal, chosen[0]);
            let (mut above, mut below) = (false, false);
            for p in &pts {
                let v = dot(&normal, p) - b;
                above |= v.is_positive();
                below |= v.is_negative();
                if above && below {
                    break;
                }
            }
            match (above, below) {
                (false, _) => {
                    facets.insert(normalized(&normal, b));
                }
                (true, false) => {
                    let neg: Point = normal.iter().map(|x| -*x).collect();
                    facets.insert(normalized(&neg, -b));
                }
                _ => {}
            }
        }
    }
    let facets: Vec<HalfSpace> = facets.into_iter().collect();
    let vertices = pts.into_iter().filter(|p| is_vertex(p, &facets, d)).collect();
    Hull { facets, vertices }
}

fn is_vertex(p: &[Rational], facets: &[HalfSpace], d: usize) -> bool {
    let active: Vec<&Point> = facets.iter().filter(|h| dot(&h.a, p) == h.b).map(|h| &h.a).collect();
    rank(&active) == d
}

/// Solves the square system `rows . x = rhs` exactly.
fn solve_square(rows: &[&Point], rhs: &[Rational]) -> Option<Point> {
    let d = rows.len();
    let mut m: Vec<Point> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.to_vec();
            row.push(*b);
            row
        })
        .collect();
    for c in 0..d {
        let p = (c..d).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let pivot = m[c].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != c && !row[c].is_zero() {
                let f = row[c] / pivot[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= f * y;
                }
            }
        }
    }
    Some((0..d).map(|i| m[i][d] / m[i][i]).collect())
}

/// Vertices of the bounded polytope `{x : a . x <= b for all half-spaces}` in `R^d`.
pub fn vertices_of(halfspaces: &[HalfSpace], d: usize) -> Vec<Point> {
    let mut out: BTreeSet<Point> = BTreeSet::new();
    let mut combos = Vec::new();
    subsets(halfspaces.len(), d, &mut combos);
    for combo in combos {
        let rows: Vec<&Point> = combo.iter().map(|&i| &halfspaces[i].a).collect();
        let rhs: Vec<Rational> = combo.iter().map(|&i| halfspaces[i].b).collect();
        if let Some(x) = solve_square(&rows, &rhs) {
            if halfspaces.iter().all(|h| dot(&h.a, &x) <= h.b) {
                out.insert(x);
            }
        }
    }
    out.into_iter().collect()
}

/// Drops half-spaces that are not facets of the polytope with the given vertices.
pub fn facets_only(halfspaces: &[HalfSpace], vertices: &[Point], d: usize) -> Vec<HalfSpace> {
    let mut out: BTreeSet<HalfSpace> = BTreeSet::new();
    for h in halfspaces {
        let on: Vec<Point> = vertices.iter().filter(|v| dot(&h.a, v) == h.b).cloned().collect();
        // A facet holds d affinely independent vertices.
        if on.len() >= d {
            let base = &on[0];
            let dirs: Vec<Point> = on[1..].iter().map(|v| diff(v, base)).collect();
            let refs: Vec<&Point> = dirs.iter().collect();
            if rank(&refs) == d - 1 {
                out.insert(normalized(&h.a, h.b));
            }
        }
    }
    out.into_iter().collect()
}

/// Area of a convex polygon given by its vertices (any order).
pub fn polygon_area(vertices: &[Point]) -> Rational {
    let n = vertices.len();
    if n < 3 {
        return Rational::zero();
    }
    let cx = vertices.iter().map(|v| v[0]).fold(Rational::zero(), |a, b| a + b) / Rational::from_integer(n as i128);
    let cy = vertices.iter().map(|v| v[1]).fold(Rational::zero(), |a, b| a + b) / Rational::from_integer(n as i128);
    let mut ordered: Vec<&Point> = vertices.iter().collect();
    // Sort counter-clockwise around the centroid: half-plane first, then cross product.
    let half = |v: &Point| -> u8 {
        let (dx, dy) = (v[0] - cx, v[1] - cy);
        u8::from(dy.is_negative() || (dy.is_zero() && dx.is_negative()))
    };
    ordered.sort_by(|a, b| {
        half(a).cmp(&half(b)).then_with(|| {
            let cross = (a[0] - cx) * (b[1] - cy) - (a[1] - cy) * (b[0] - cx);
            Rational::zero().cmp(&cross)
        })
    });
    let mut twice = Rational::zero();
    for i in 0..n {
        let (p, q) = (ordered[i], ordered[(i + 1) % n]);
        twice += p[0] * q[1] - p[1] * q[0];
    }
    twice.abs() / Rational::from_integer(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn p(v: &[Rational]) -> Point {
        v.to_vec()
    }

    #[test]
    fn square_with_interior_and_edge_points() {
        let pts = vec![
            p(&[int(0), int(0)]),
            p(&[int(2), int(0)]),
            p(&[int(2), int(2)]),
            p(&[int(0), int(2)]),
            p(&[int(1), int(0)]),
            p(&[int(1), int(1)]),
        ];
        let h = convex_hull(&pts);
        assert_eq!(h.facets.len(), 4);
        assert_eq!(h.vertices.len(), 4);
        assert_eq!(polygon_area(&h.vertices), int(4));
    }

    #[test]
    fn tetrahedron_facets() {
        let pts = vec![
            p(&[int(0), int(0), int(0)]),
            p(&[int(4), int(0), int(0)]),
            p(&[int(0), int(4), int(0)]),
            p(&[int(0), int(0), int(4)]),
            p(&[int(1), int(1), int(2)]),
        ];
        let h = convex_hull(&pts);
        assert_eq!(h.vertices.len(), 4);
        assert!(h.facets.contains(&HalfSpace { a: vec![int(1), int(1), int(1)], b: int(4) }));
        assert_eq!(vertices_of(&h.facets, 3), h.vertices);
    }

    #[test]
    fn pentagon_area() {
        let v = vec![
            p(&[int(0), int(0)]),
            p(&[ratio(5, 2), int(0)]),
            p(&[int(2), int(1)]),
            p(&[int(1), int(2)]),
            p(&[int(0), ratio(5, 2)]),
        ];
        assert_eq!(polygon_area(&v), int(4));
    }

    #[test]
    fn interval() {
        let h = convex_hull(&[p(&[int(0)]), p(&[int(3)]), p(&[int(1)])]);
        assert_eq!(h.vertices, [p(&[int(0)]), p(&[int(3)])]);
        assert_eq!(h.facets.len(), 2);
    }
}
