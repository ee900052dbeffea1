//! Finite subgroups of GL(2, Z) and their thirteen conjugacy classes.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::smith_normal_form;
use crate::mat2::Mat2;

/// Rotation by a quarter turn.
pub const A: Mat2 = Mat2::new(0, 1, -1, 0);
/// Rotation of order six.
pub const B: Mat2 = Mat2::new(0, -1, 1, 1);
/// Reflection swapping the basis vectors.
pub const R: Mat2 = Mat2::new(0, 1, 1, 0);
/// `A * R = diag(1, -1)`.
pub const AR: Mat2 = Mat2::new(1, 0, 0, -1);
pub const NEG_I: Mat2 = Mat2::NEG_IDENTITY;

/// A finite subgroup of GL(2, Z). Elements are sorted with the identity
/// first, so index 0 is always the identity. Equality compares elements
/// only.
#[derive(Clone, Serialize)]
pub struct PointGroup {
    elements: Vec<Mat2>,
    generators: Vec<Mat2>,
}

impl PartialEq for PointGroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for PointGroup {}

impl std::hash::Hash for PointGroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

pub fn close_point_group(mats: &[Mat2]) -> Result<PointGroup> {
    if mats.iter().any(|m| !m.is_unimodular()) {
        return Err(Error::NotFinite);
    }
    let mut seen: BTreeSet<Mat2> = BTreeSet::new();
    seen.insert(Mat2::IDENTITY);
    let mut queue: VecDeque<Mat2> = VecDeque::from([Mat2::IDENTITY]);
    while let Some(g) = queue.pop_front() {
        for m in mats {
            let h = g * *m;
            if seen.insert(h) {
                if seen.len() > 12 {
                    return Err(Error::NotFinite);
                }
                queue.push_back(h);
            }
        }
    }
    let mut elements: Vec<Mat2> = seen.into_iter().filter(|m| *m != Mat2::IDENTITY).collect();
    elements.insert(0, Mat2::IDENTITY);
    let mut generators: Vec<Mat2> = Vec::new();
    for m in mats {
        if *m != Mat2::IDENTITY && !generators.contains(m) {
            generators.push(*m);
        }
    }
    Ok(PointGroup {
        elements,
        generators,
    })
}

impl PointGroup {
    pub fn trivial() -> PointGroup {
        PointGroup {
            elements: vec![Mat2::IDENTITY],
            generators: Vec::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        self.elements.contains(m)
    }

    pub fn index_of(&self, m: &Mat2) -> Option<usize> {
        self.elements.iter().position(|e| e == m)
    }

    pub fn is_orientation_preserving(&self) -> bool {
        self.elements.iter().all(|m| m.det() == 1)
    }

    pub fn is_subgroup_of(&self, other: &PointGroup) -> bool {
        self.elements.iter().all(|m| other.contains(m))
    }

    pub fn same_elements(&self, other: &PointGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    /// `U * H * U^-1`.
    pub fn conjugate_by(&self, u: &Mat2) -> PointGroup {
        let gens: Vec<Mat2> = self.generators.iter().map(|g| u.conjugate(g)).collect();
        close_point_group(&gens).expect("conjugate of a finite group is finite")
    }

    /// A generating set of size at most two (every finite subgroup of
    /// GL(2, Z) is cyclic or dihedral).
    pub fn minimal_generators(&self) -> Vec<Mat2> {
        if self.order() == 1 {
            return Vec::new();
        }
        for g in &self.elements[1..] {
            if close_point_group(&[*g]).unwrap().order() == self.order() {
                return vec![*g];
            }
        }
        // Dihedral: a rotation of maximal order plus any reflection.
        let rotation = self
            .elements
            .iter()
            .filter(|m| m.det() == 1)
            .max_by_key(|m| (m.order().unwrap_or(0), **m))
            .copied()
            .unwrap();
        let reflection = self
            .elements
            .iter()
            .find(|m| m.det() == -1)
            .copied()
            .expect("non-cyclic finite group contains a reflection");
        if rotation == Mat2::IDENTITY {
            // Klein four-group generated by two reflections.
            let other = self
                .elements
                .iter()
                .find(|m| m.det() == -1 && **m != reflection)
                .copied()
                .unwrap();
            return vec![reflection, other];
        }
        vec![rotation, reflection]
    }

    /// All subgroups (each finite subgroup of GL(2, Z) is generated by at
    /// most two elements), in order of increasing size.
    pub fn subgroups(&self) -> Vec<PointGroup> {
        let mut found: BTreeMap<Vec<Mat2>, PointGroup> = BTreeMap::new();
        let n = self.order();
        for i in 0..n {
            for j in i..n {
                let h = close_point_group(&[self.elements[i], self.elements[j]]).unwrap();
                let mut key = h.elements.clone();
                key.sort();
                found.entry(key).or_insert_with(|| {
                    let gens = h.minimal_generators();
                    close_point_group(&gens).unwrap()
                });
            }
        }
        let mut out: Vec<PointGroup> = found.into_values().collect();
        out.sort_by_key(|h| h.order());
        out
    }

    /// Multiset of `(trace, det)` over the elements.
    pub fn trace_det_profile(&self) -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> = self.elements.iter().map(|m| (m.trace(), m.det())).collect();
        v.sort();
        v
    }
}

impl fmt::Debug for PointGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointGroup{:?}", self.elements)
    }
}

/// The thirteen GL(2, Z)-conjugacy classes of finite subgroups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PointGroupClass {
    Trivial,
    C2Rot,
    C2Mirror,
    C2GlideAxis,
    C3,
    C4,
    C6,
    D2Mixed,
    D2Axes,
    D3Long,
    D3Short,
    D4,
    D6,
}

impl PointGroupClass {
    pub const ALL: [PointGroupClass; 13] = [
        PointGroupClass::Trivial,
        PointGroupClass::C2Rot,
        PointGroupClass::C2Mirror,
        PointGroupClass::C2GlideAxis,
        PointGroupClass::C3,
        PointGroupClass::C4,
        PointGroupClass::C6,
        PointGroupClass::D2Mixed,
        PointGroupClass::D2Axes,
        PointGroupClass::D3Long,
        PointGroupClass::D3Short,
        PointGroupClass::D4,
        PointGroupClass::D6,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PointGroupClass::Trivial => "trivial",
            PointGroupClass::C2Rot => "C2_rot",
            PointGroupClass::C2Mirror => "C2_mirror",
            PointGroupClass::C2GlideAxis => "C2_glideaxis",
            PointGroupClass::C3 => "C3",
            PointGroupClass::C4 => "C4",
            PointGroupClass::C6 => "C6",
            PointGroupClass::D2Mixed => "D2_mixed",
            PointGroupClass::D2Axes => "D2_axes",
            PointGroupClass::D3Long => "D3_long",
            PointGroupClass::D3Short => "D3_short",
            PointGroupClass::D4 => "D4",
            PointGroupClass::D6 => "D6",
        }
    }

    /// Generators in the notation A, B, R of the standard matrices.
    pub fn generator_notation(self) -> &'static str {
        match self {
            PointGroupClass::Trivial => "<1>",
            PointGroupClass::C2Rot => "<-I>",
            PointGroupClass::C2Mirror => "<R>",
            PointGroupClass::C2GlideAxis => "<AR>",
            PointGroupClass::C3 => "<B^2>",
            PointGroupClass::C4 => "<A>",
            PointGroupClass::C6 => "<B>",
            PointGroupClass::D2Mixed => "<-I,R>",
            PointGroupClass::D2Axes => "<-I,AR>",
            PointGroupClass::D3Long => "<B^2,R>",
            PointGroupClass::D3Short => "<B^2,BR>",
            PointGroupClass::D4 => "<A,R>",
            PointGroupClass::D6 => "<B,R>",
        }
    }

    pub fn representative_generators(self) -> Vec<Mat2> {
        match self {
            PointGroupClass::Trivial => vec![],
            PointGroupClass::C2Rot => vec![NEG_I],
            PointGroupClass::C2Mirror => vec![R],
            PointGroupClass::C2GlideAxis => vec![AR],
            PointGroupClass::C3 => vec![B * B],
            PointGroupClass::C4 => vec![A],
            PointGroupClass::C6 => vec![B],
            PointGroupClass::D2Mixed => vec![NEG_I, R],
            PointGroupClass::D2Axes => vec![NEG_I, AR],
            PointGroupClass::D3Long => vec![B * B, R],
            PointGroupClass::D3Short => vec![B * B, B * R],
            PointGroupClass::D4 => vec![A, R],
            PointGroupClass::D6 => vec![B, R],
        }
    }

    pub fn representative(self) -> PointGroup {
        close_point_group(&self.representative_generators()).expect("standard groups are finite")
    }

    pub fn order(self) -> usize {
        match self {
            PointGroupClass::Trivial => 1,
            PointGroupClass::C2Rot | PointGroupClass::C2Mirror | PointGroupClass::C2GlideAxis => 2,
            PointGroupClass::C3 => 3,
            PointGroupClass::C4 | PointGroupClass::D2Mixed | PointGroupClass::D2Axes => 4,
            PointGroupClass::C6 | PointGroupClass::D3Long | PointGroupClass::D3Short => 6,
            PointGroupClass::D4 => 8,
            PointGroupClass::D6 => 12,
        }
    }

    /// Abstractly cyclic or the Klein four-group.
    pub fn is_cyclic_or_klein(self) -> bool {
        !matches!(
            self,
            PointGroupClass::D3Long | PointGroupClass::D3Short | PointGroupClass::D4 | PointGroupClass::D6
        )
    }

    /// Conjugate to a subgroup of `<A, R>`.
    pub fn is_square_compatible(self) -> bool {
        matches!(
            self,
            PointGroupClass::Trivial
                | PointGroupClass::C2Rot
                | PointGroupClass::C2Mirror
                | PointGroupClass::C2GlideAxis
                | PointGroupClass::C4
                | PointGroupClass::D2Mixed
                | PointGroupClass::D2Axes
                | PointGroupClass::D4
        )
    }
}

impl fmt::Display for PointGroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PointGroupClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        PointGroupClass::ALL
            .into_iter()
            .find(|c| c.label().eq_ignore_ascii_case(t) || c.generator_notation() == t)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Whether the reflection `g` is of mirror type (`Z^2 / (g - I) Z^2` torsion
/// free, conjugate to `R`) rather than axis type (torsion `Z/2`, conjugate
/// to `AR`).
fn is_mirror_type(g: &Mat2) -> bool {
    let snf = smith_normal_form(&g.sub_identity().to_int_matrix());
    snf.torsion().is_empty()
}

/// Action sign of a reflection on `Z^2 / (c - I) Z^2 = Z/3`, where `c` has
/// order 3.
fn z3_coinvariant_sign(c: &Mat2, s: &Mat2) -> i64 {
    let ci = c.sub_identity();
    let phi = (0..3)
        .flat_map(|a| (0..3).map(move |b| [a, b]))
        .filter(|v| *v != [0, 0])
        .find(|v| {
            let row = [
                v[0] * ci.0[0][0] + v[1] * ci.0[1][0],
                v[0] * ci.0[0][1] + v[1] * ci.0[1][1],
            ];
            row[0].rem_euclid(3) == 0 && row[1].rem_euclid(3) == 0
        })
        .expect("Z^2/(c-I)Z^2 is cyclic of order 3");
    let eval = |x: [i64; 2]| (phi[0] * x[0] + phi[1] * x[1]).rem_euclid(3);
    let x = if eval([1, 0]) != 0 { [1, 0] } else { [0, 1] };
    let before = eval(x);
    let after = eval(s.apply_int(x));
    if before == after {
        1
    } else {
        -1
    }
}

pub fn classify_point_group(h: &PointGroup) -> PointGroupClass {
    let elements = h.elements();
    let reflections: Vec<&Mat2> = elements.iter().filter(|m| m.det() == -1).collect();
    match h.order() {
        1 => PointGroupClass::Trivial,
        2 => {
            let g = &elements[1];
            if *g == NEG_I {
                PointGroupClass::C2Rot
            } else if is_mirror_type(g) {
                PointGroupClass::C2Mirror
            } else {
                PointGroupClass::C2GlideAxis
            }
        }
        3 => PointGroupClass::C3,
        4 if reflections.is_empty() => PointGroupClass::C4,
        4 => {
            if is_mirror_type(reflections[0]) {
                PointGroupClass::D2Mixed
            } else {
                PointGroupClass::D2Axes
            }
        }
        6 if reflections.is_empty() => PointGroupClass::C6,
        6 => {
            let c = elements
                .iter()
                .find(|m| m.order() == Some(3))
                .expect("dihedral group of order 6 has a rotation of order 3");
            if z3_coinvariant_sign(c, reflections[0]) == -1 {
                PointGroupClass::D3Long
            } else {
                PointGroupClass::D3Short
            }
        }
        8 => PointGroupClass::D4,
        12 => PointGroupClass::D6,
        _ => classify_by_search(h).expect("finite subgroup of GL(2,Z) of unexpected order"),
    }
}

/// Brute-force classification by conjugacy search over small unimodular
/// matrices; a cross-check for the invariant-based classifier.
pub fn classify_by_search(h: &PointGroup) -> Option<PointGroupClass> {
    let reduced = h.conjugate_by(&reduce_basis(h).inverse());
    PointGroupClass::ALL
        .into_iter()
        .filter(|c| c.order() == h.order())
        .find(|c| find_conjugator(&reduced, &c.representative(), 3).is_some())
}

/// Unimodular matrices with entries in `[-bound, bound]`, in a fixed order.
pub fn unimodular_matrices(bound: i64) -> impl Iterator<Item = Mat2> {
    let r = -bound..=bound;
    r.clone()
        .flat_map(move |a| {
            let r = -bound..=bound;
            r.flat_map(move |b| {
                let r = -bound..=bound;
                r.flat_map(move |c| (-bound..=bound).map(move |d| Mat2::new(a, b, c, d)))
            })
        })
        .filter(Mat2::is_unimodular)
}

/// Some `U` with entries bounded by `bound` and `U * from * U^-1 = to`.
pub fn find_conjugator(from: &PointGroup, to: &PointGroup, bound: i64) -> Option<Mat2> {
    if from.order() != to.order() || from.trace_det_profile() != to.trace_det_profile() {
        return None;
    }
    let gens = from.minimal_generators();
    unimodular_matrices(bound).find(|u| gens.iter().all(|g| to.contains(&u.conjugate(g))))
}

/// A basis change `U` such that `U^-1 * H * U` has small entries: the
/// columns of `U` form a Lagrange-reduced basis for the H-invariant form
/// `sum M^T M`.
pub fn reduce_basis(h: &PointGroup) -> Mat2 {
    let mut q = [[0i64; 2]; 2];
    for m in h.elements() {
        let t = m.0;
        for i in 0..2 {
            for j in 0..2 {
                q[i][j] += t[0][i] * t[0][j] + t[1][i] * t[1][j];
            }
        }
    }
    let dot = |u: [i64; 2], v: [i64; 2]| {
        u[0] * (q[0][0] * v[0] + q[0][1] * v[1]) + u[1] * (q[1][0] * v[0] + q[1][1] * v[1])
    };
    let (mut b1, mut b2) = ([1i64, 0], [0i64, 1]);
    loop {
        if dot(b2, b2) < dot(b1, b1) {
            std::mem::swap(&mut b1, &mut b2);
        }
        let n = dot(b1, b2);
        let d = dot(b1, b1);
        // nearest integer to n / d
        let mu = (2 * n + d).div_euclid(2 * d);
        if mu == 0 {
            break;
        }
        b2 = [b2[0] - mu * b1[0], b2[1] - mu * b1[1]];
    }
    Mat2::from_columns(b1, b2)
}

/// `U` with `U * H * U^-1` equal (as a set) to the standard representative
/// of its class.
pub fn conjugator_to_standard(h: &PointGroup) -> Option<(PointGroupClass, Mat2)> {
    let class = classify_point_group(h);
    let v = reduce_basis(h);
    let reduced = h.conjugate_by(&v.inverse());
    let w = find_conjugator(&reduced, &class.representative(), 3)?;
    Some((class, w * v.inverse()))
}

/// Whether `h1` is isomorphic to a subgroup of `h2` by an isomorphism that
/// preserves characteristic polynomials elementwise (conjugacy in GL(2, Q)
/// to a subgroup).
pub fn q_embeddable(h1: &PointGroup, h2: &PointGroup) -> bool {
    let gens = h1.minimal_generators();
    h2.subgroups()
        .iter()
        .filter(|s| s.order() == h1.order())
        .any(|s| char_preserving_isomorphism(h1, &gens, s))
}

fn char_preserving_isomorphism(h1: &PointGroup, gens: &[Mat2], s: &PointGroup) -> bool {
    if gens.is_empty() {
        return s.order() == 1;
    }
    let key = |m: &Mat2| (m.trace(), m.det());
    let candidates: Vec<Vec<Mat2>> = gens
        .iter()
        .map(|g| s.elements().iter().filter(|m| key(m) == key(g)).copied().collect())
        .collect();
    let mut choice = vec![0usize; gens.len()];
    loop {
        if candidates.iter().all(|c| !c.is_empty()) {
            let images: Vec<Mat2> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
            if extends_to_isomorphism(h1, gens, &images, s) {
                return true;
            }
        } else {
            return false;
        }
        // advance odometer
        let mut k = 0;
        loop {
            if k == choice.len() {
                return false;
            }
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn extends_to_isomorphism(h1: &PointGroup, gens: &[Mat2], images: &[Mat2], s: &PointGroup) -> bool {
    let mut map: BTreeMap<Mat2, Mat2> = BTreeMap::new();
    map.insert(Mat2::IDENTITY, Mat2::IDENTITY);
    let mut queue = VecDeque::from([Mat2::IDENTITY]);
    while let Some(g) = queue.pop_front() {
        let img = map[&g];
        for (x, y) in gens.iter().zip(images) {
            let (h, hi) = (g * *x, img * *y);
            match map.get(&h) {
                Some(existing) if *existing != hi => return false,
                Some(_) => {}
                None => {
                    map.insert(h, hi);
                    queue.push_back(h);
                }
            }
        }
    }
    let image_set: BTreeSet<Mat2> = map.values().copied().collect();
    map.len() == h1.order()
        && image_set.len() == s.order()
        && map.iter().all(|(a, b)| a.trace() == b.trace() && a.det() == b.det())
}
