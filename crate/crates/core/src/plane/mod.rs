//! Projective planes, collineations, and fixed-point structures.
//!
//! Points and lines of `PG(2,q)` are canonical coordinate vectors whose first
//! nonzero coordinate is 1; a line `[a,b,c]` holds the points with
//! `ax + by + cz = 0`. Collineations are stored as a point permutation
//! together with the induced line permutation.

mod checks;

use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{field_of_order_any_char, Field};
use crate::group::Bitset;
use crate::matrix::Matrix;
use crate::perm::Perm;

pub use checks::{
    counting_identity_check, fixpoint_transitivity_check, odd_transitive_search,
    odd_transitive_search_with, singer_normalizer, singer_normalizer_generators, OddSearch,
    PlaneGroup,
};

/// Planes up to this order get the exhaustive axiom check at construction.
const AXIOM_CHECK_MAX_ORDER: u64 = 16;

/// A finite projective plane given by its incidence structure, with
/// coordinates when it comes from `PG(2,q)`.
#[derive(Debug)]
pub struct IncidencePlane {
    order: u64,
    field: Option<Field>,
    points: Vec<[u32; 3]>,
    lines: Vec<[u32; 3]>,
    point_index: FxHashMap<[u32; 3], u32>,
    /// Points on each line.
    line_points: Vec<Vec<u32>>,
    /// Lines through each point.
    point_lines: Vec<Vec<u32>>,
    /// Incidence rows, one bitset of points per line.
    incidence: Vec<Bitset>,
}

fn normalize(f: &Field, v: [u32; 3]) -> Option<[u32; 3]> {
    let lead = *v.iter().find(|&&c| c != 0)?;
    let inv = f.inv(lead).expect("nonzero");
    Some([f.mul(v[0], inv), f.mul(v[1], inv), f.mul(v[2], inv)])
}

fn canonical_vectors(q: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::with_capacity((q * q + q + 1) as usize);
    for a in 0..q {
        for b in 0..q {
            out.push([1, a, b]);
        }
    }
    for a in 0..q {
        out.push([0, 1, a]);
    }
    out.push([0, 0, 1]);
    out
}

/// `PG(2,q)`, built over `GF(q)` for any prime power `q`.
pub fn pg2(q: u64) -> Result<Arc<IncidencePlane>> {
    let f = field_of_order_any_char(q)?;
    let qq = f.order();
    let points = canonical_vectors(qq);
    let lines = canonical_vectors(qq);
    let mut point_index = FxHashMap::default();
    for (i, p) in points.iter().enumerate() {
        point_index.insert(*p, i as u32);
    }
    let dot = |l: &[u32; 3], p: &[u32; 3]| {
        (0..3).fold(0u32, |acc, i| f.add(acc, f.mul(l[i], p[i])))
    };
    let line_points: Vec<Vec<u32>> = lines
        .iter()
        .map(|l| {
            (0..points.len() as u32)
                .filter(|&i| dot(l, &points[i as usize]) == 0)
                .collect()
        })
        .collect();
    let plane = IncidencePlane::assemble(q, Some(f.clone()), points, lines, point_index, line_points);
    if q <= AXIOM_CHECK_MAX_ORDER {
        plane.check_axioms()?;
    }
    Ok(Arc::new(plane))
}

impl IncidencePlane {
    fn assemble(
        order: u64,
        field: Option<Field>,
        points: Vec<[u32; 3]>,
        lines: Vec<[u32; 3]>,
        point_index: FxHashMap<[u32; 3], u32>,
        line_points: Vec<Vec<u32>>,
    ) -> IncidencePlane {
        let np = line_points.iter().flatten().map(|&p| p as usize + 1).max().unwrap_or(0);
        let np = np.max(points.len());
        let mut point_lines = vec![Vec::new(); np];
        let mut incidence = Vec::with_capacity(line_points.len());
        for (l, pts) in line_points.iter().enumerate() {
            let mut row = Bitset::new(np);
            for &p in pts {
                point_lines[p as usize].push(l as u32);
                row.insert(p as usize);
            }
            incidence.push(row);
        }
        IncidencePlane {
            order,
            field,
            points,
            lines,
            point_index,
            line_points,
            point_lines,
            incidence,
        }
    }

    /// A plane from an abstract incidence structure on points `0..n`; the
    /// axioms are always checked.
    pub fn from_lines(line_points: Vec<Vec<u32>>) -> Result<IncidencePlane> {
        let n = line_points.len() as u64;
        let order = (1..n).find(|x| x * x + x + 1 == n).ok_or_else(|| {
            Error::invalid(format!("{n} lines is not x²+x+1 for any order x"))
        })?;
        let plane = IncidencePlane::assemble(
            order,
            None,
            Vec::new(),
            Vec::new(),
            FxHashMap::default(),
            line_points,
        );
        plane.check_axioms()?;
        Ok(plane)
    }

    /// Every line has `x+1` points, every point lies on `x+1` lines, and any
    /// two points share exactly one line.
    pub fn check_axioms(&self) -> Result<()> {
        let x = self.order as usize;
        let n = x * x + x + 1;
        if self.line_points.len() != n || self.point_lines.len() != n {
            return Err(Error::invalid("wrong number of points or lines"));
        }
        if order_below_two(x) {
            return Err(Error::invalid("plane order must be at least 2"));
        }
        if self.line_points.iter().any(|l| l.len() != x + 1) {
            return Err(Error::invalid("a line has the wrong number of points"));
        }
        if self.point_lines.iter().any(|l| l.len() != x + 1) {
            return Err(Error::invalid("a point lies on the wrong number of lines"));
        }
        for a in 0..n {
            for b in a + 1..n {
                let common = self.point_lines[a]
                    .iter()
                    .filter(|&&l| self.incidence[l as usize].contains(b))
                    .count();
                if common != 1 {
                    return Err(Error::invalid(format!(
                        "points {a} and {b} share {common} lines"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn num_points(&self) -> usize {
        self.point_lines.len()
    }

    pub fn num_lines(&self) -> usize {
        self.line_points.len()
    }

    pub fn field(&self) -> Option<&Field> {
        self.field.as_ref()
    }

    pub fn point(&self, i: u32) -> [u32; 3] {
        self.points[i as usize]
    }

    pub fn line(&self, i: u32) -> [u32; 3] {
        self.lines[i as usize]
    }

    pub fn point_of(&self, v: [u32; 3]) -> Option<u32> {
        let f = self.field.as_ref()?;
        self.point_index.get(&normalize(f, v)?).copied()
    }

    pub fn points_on(&self, line: u32) -> &[u32] {
        &self.line_points[line as usize]
    }

    pub fn lines_through(&self, point: u32) -> &[u32] {
        &self.point_lines[point as usize]
    }

    pub fn incident(&self, point: u32, line: u32) -> bool {
        self.incidence[line as usize].contains(point as usize)
    }

    /// The unique line through two distinct points.
    pub fn line_through(&self, a: u32, b: u32) -> u32 {
        *self.point_lines[a as usize]
            .iter()
            .find(|&&l| self.incident(b, l))
            .expect("two points span a line")
    }

    /// Incidence matrix as CSV rows of 0/1, one row per line.
    pub fn incidence_csv(&self) -> String {
        let n = self.num_points();
        let mut out = String::new();
        for row in &self.incidence {
            let cells: Vec<&str> = (0..n).map(|p| if row.contains(p) { "1" } else { "0" }).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn order_below_two(x: usize) -> bool {
    x < 2
}

/// A collineation: point permutation plus induced line permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Collineation {
    pub points: Perm,
    pub lines: Perm,
}

impl Collineation {
    /// Checks that the point permutation maps lines onto lines and derives
    /// the line permutation.
    pub fn from_point_perm(plane: &IncidencePlane, points: Perm) -> Result<Collineation> {
        if points.degree() != plane.num_points() {
            return Err(Error::invalid("permutation degree differs from the point count"));
        }
        let mut images = Vec::with_capacity(plane.num_lines());
        for l in 0..plane.num_lines() as u32 {
            let pts = plane.points_on(l);
            let (a, b) = (points.apply(pts[0]), points.apply(pts[1]));
            let image = plane.line_through(a, b);
            if pts.iter().any(|&p| !plane.incident(points.apply(p), image)) {
                return Err(Error::invalid(format!("line {l} is not mapped onto a line")));
            }
            images.push(image);
        }
        let lines = Perm::from_images(images)?;
        Ok(Collineation { points, lines })
    }

    /// The semilinear map `v ↦ σ^e(v)·M`, `σ` the `p`-th power map.
    pub fn semilinear(plane: &IncidencePlane, m: &Matrix, e: u32) -> Result<Collineation> {
        let f = plane
            .field()
            .ok_or_else(|| Error::invalid("plane has no coordinates"))?;
        if m.dim() != 3 || m.field().order() != f.order() || m.field().modulus() != f.modulus() {
            return Err(Error::invalid("matrix must be 3x3 over the plane's field"));
        }
        let images: Vec<u32> = (0..plane.num_points() as u32)
            .map(|i| {
                let v = plane.point(i);
                let tw: Vec<u32> = v.iter().map(|&c| f.frob_pow(c, e)).collect();
                let w = m.apply_row(&tw);
                plane.point_of([w[0], w[1], w[2]]).expect("nonzero image")
            })
            .collect();
        Collineation::from_point_perm(plane, Perm::from_images(images)?)
    }

    pub fn fixed_points(&self) -> Vec<u32> {
        self.points.fixed_points()
    }

    pub fn fixed_lines(&self) -> Vec<u32> {
        self.lines.fixed_points()
    }

    pub fn then(&self, other: &Collineation) -> Collineation {
        Collineation {
            points: self.points.then(&other.points),
            lines: self.lines.then(&other.lines),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.points.is_identity()
    }
}

/// The Baer involution `x ↦ x^u` applied coordinatewise on `PG(2,u²)`.
pub fn frobenius_collineation(plane: &IncidencePlane) -> Result<Collineation> {
    let f = plane
        .field()
        .ok_or_else(|| Error::invalid("plane has no coordinates"))?;
    if f.degree() % 2 != 0 {
        return Err(Error::invalid(format!("q = {} is not a square", f.order())));
    }
    let id = Matrix::identity(f, 3);
    Collineation::semilinear(plane, &id, f.degree() / 2)
}

/// How the number of fixed points sits against the Baer spectrum
/// `u²+u+1, u²+1, u²+2` for planes of square order `u²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumTag {
    BaerSubplane,
    USquaredPlusOne,
    USquaredPlusTwo,
    Other,
    NotSquareOrder,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedStructure {
    pub points: Vec<u32>,
    pub lines: Vec<u32>,
    /// Order of the subplane formed by the fixed points and lines, if they
    /// form one.
    pub subplane_order: Option<u64>,
    pub spectrum: SpectrumTag,
}

fn isqrt(x: u64) -> Option<u64> {
    let r = (x as f64).sqrt().round() as u64;
    (r * r == x).then_some(r)
}

pub fn fixed_structure(plane: &IncidencePlane, g: &Collineation) -> FixedStructure {
    let points = g.fixed_points();
    let lines = g.fixed_lines();
    let subplane_order = subplane_order(plane, &points, &lines);
    let spectrum = match isqrt(plane.order()) {
        None => SpectrumTag::NotSquareOrder,
        Some(u) => {
            let n = points.len() as u64;
            if n == u * u + u + 1 {
                SpectrumTag::BaerSubplane
            } else if n == u * u + 1 {
                SpectrumTag::USquaredPlusOne
            } else if n == u * u + 2 {
                SpectrumTag::USquaredPlusTwo
            } else {
                SpectrumTag::Other
            }
        }
    };
    FixedStructure {
        points,
        lines,
        subplane_order,
        spectrum,
    }
}

/// Order `m >= 2` if the given points and lines, with inherited incidence,
/// form a projective plane.
fn subplane_order(plane: &IncidencePlane, points: &[u32], lines: &[u32]) -> Option<u64> {
    let n = points.len();
    if n != lines.len() || n < 7 {
        return None;
    }
    let m = (2..n as u64).find(|m| m * m + m + 1 == n as u64)? as usize;
    let pset: rustc_hash::FxHashSet<u32> = points.iter().copied().collect();
    for &l in lines {
        if plane.points_on(l).iter().filter(|p| pset.contains(p)).count() != m + 1 {
            return None;
        }
    }
    let lset: rustc_hash::FxHashSet<u32> = lines.iter().copied().collect();
    for &p in points {
        if plane.lines_through(p).iter().filter(|l| lset.contains(l)).count() != m + 1 {
            return None;
        }
    }
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            if !lset.contains(&plane.line_through(a, b)) {
                return None;
            }
        }
    }
    Some(m as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_sizes() {
        for (q, n) in [(2u64, 7usize), (3, 13), (4, 21), (5, 31), (9, 91)] {
            let p = pg2(q).unwrap();
            assert_eq!(p.num_points(), n);
            assert_eq!(p.num_lines(), n);
            assert_eq!(p.points_on(0).len(), q as usize + 1);
        }
        assert!(pg2(6).is_err());
    }

    #[test]
    fn frobenius_on_pg2_9() {
        let plane = pg2(9).unwrap();
        let g = frobenius_collineation(&plane).unwrap();
        assert!(g.then(&g).is_identity());
        assert!(!g.is_identity());
        let fs = fixed_structure(&plane, &g);
        assert_eq!(fs.points.len(), 13);
        assert_eq!(fs.lines.len(), 13);
        assert_eq!(fs.subplane_order, Some(3));
        assert_eq!(fs.spectrum, SpectrumTag::BaerSubplane);
    }

    #[test]
    fn frobenius_on_pg2_4_and_49() {
        let plane = pg2(4).unwrap();
        let fs = fixed_structure(&plane, &frobenius_collineation(&plane).unwrap());
        assert_eq!((fs.points.len(), fs.subplane_order), (7, Some(2)));
        let plane = pg2(49).unwrap();
        let fs = fixed_structure(&plane, &frobenius_collineation(&plane).unwrap());
        assert_eq!((fs.points.len(), fs.subplane_order), (57, Some(7)));
        assert!(frobenius_collineation(&pg2(27).unwrap()).is_err());
    }

    #[test]
    fn homology_fixes_line_and_center() {
        let plane = pg2(9).unwrap();
        let f = plane.field().unwrap().clone();
        let m = Matrix::diagonal(&f, &[1, 1, f.neg(1)]).unwrap();
        let g = Collineation::semilinear(&plane, &m, 0).unwrap();
        let fs = fixed_structure(&plane, &g);
        assert_eq!(fs.points.len(), 11);
        assert_eq!(fs.subplane_order, None);
        assert_eq!(fs.spectrum, SpectrumTag::USquaredPlusTwo);
    }

    #[test]
    fn identity_fixes_everything() {
        let plane = pg2(3).unwrap();
        let f = plane.field().unwrap().clone();
        let g = Collineation::semilinear(&plane, &Matrix::identity(&f, 3), 0).unwrap();
        let fs = fixed_structure(&plane, &g);
        assert_eq!(fs.points.len(), 13);
        assert_eq!(fs.subplane_order, Some(3));
    }

    #[test]
    fn non_collineation_rejected() {
        let plane = pg2(3).unwrap();
        let swap = Perm::from_cycles(13, &[&[0, 1]]).unwrap();
        assert!(Collineation::from_point_perm(&plane, swap).is_err());
    }

    #[test]
    fn fano_from_lines() {
        let lines = vec![
            vec![0, 1, 2],
            vec![0, 3, 4],
            vec![0, 5, 6],
            vec![1, 3, 5],
            vec![1, 4, 6],
            vec![2, 3, 6],
            vec![2, 4, 5],
        ];
        let p = IncidencePlane::from_lines(lines).unwrap();
        assert_eq!(p.order(), 2);
        let bad = vec![vec![0, 1, 2]; 7];
        assert!(IncidencePlane::from_lines(bad).is_err());
    }
}
