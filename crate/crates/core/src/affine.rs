//! Affine maps `x -> Mx + t` with `M` in GL(2, Z) and `t` rational, and the
//! crystallographic groups they generate.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::holonomy::{close_point_group, PointGroup};
use crate::linalg::{integer_solve, lattice_basis, Int, IntMatrix, Rat};
use crate::mat2::{fmt_vec, vec_add, vec_is_integral, vec_is_zero, vec_neg, vec_sub, zero_vec, Mat2, Vec2};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineElement {
    pub linear: Mat2,
    pub translation: Vec2,
}

impl AffineElement {
    pub fn new(linear: Mat2, translation: Vec2) -> AffineElement {
        AffineElement {
            linear,
            translation,
        }
    }

    pub fn identity() -> AffineElement {
        AffineElement::new(Mat2::IDENTITY, zero_vec())
    }

    pub fn linear(m: Mat2) -> AffineElement {
        AffineElement::new(m, zero_vec())
    }

    pub fn translation(t: Vec2) -> AffineElement {
        AffineElement::new(Mat2::IDENTITY, t)
    }

    pub fn is_identity(&self) -> bool {
        self.linear == Mat2::IDENTITY && vec_is_zero(&self.translation)
    }

    pub fn is_translation(&self) -> bool {
        self.linear == Mat2::IDENTITY
    }

    pub fn compose(&self, other: &AffineElement) -> AffineElement {
        AffineElement {
            linear: self.linear * other.linear,
            translation: vec_add(&self.translation, &self.linear.apply(&other.translation)),
        }
    }

    pub fn inverse(&self) -> AffineElement {
        let inv = self.linear.inverse();
        AffineElement {
            linear: inv,
            translation: vec_neg(&inv.apply(&self.translation)),
        }
    }

    pub fn pow(&self, n: i64) -> AffineElement {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(AffineElement::identity(), |acc, _| acc.compose(&base))
    }

    /// `self * other * self^-1`.
    pub fn conjugate(&self, other: &AffineElement) -> AffineElement {
        self.compose(other).compose(&self.inverse())
    }

    pub fn apply(&self, p: &Vec2) -> Vec2 {
        vec_add(&self.linear.apply(p), &self.translation)
    }
}

pub fn compose(a: &AffineElement, b: &AffineElement) -> AffineElement {
    a.compose(b)
}

pub fn inverse(a: &AffineElement) -> AffineElement {
    a.inverse()
}

impl fmt::Display for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + ({}, {})",
            self.linear, self.translation[0], self.translation[1]
        )
    }
}

impl fmt::Debug for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for AffineElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AffineElement", 2)?;
        st.serialize_field("linear", &self.linear)?;
        st.serialize_field("translation", &vec_strings(&self.translation))?;
        st.end()
    }
}

pub(crate) fn vec_strings(v: &Vec2) -> [String; 2] {
    [v[0].to_string(), v[1].to_string()]
}

/// A 2x2 rational matrix stored by rows.
pub type RatMat2 = [[Rat; 2]; 2];

pub fn rat_mat_from_columns(c0: &Vec2, c1: &Vec2) -> RatMat2 {
    [[c0[0].clone(), c1[0].clone()], [c0[1].clone(), c1[1].clone()]]
}

pub fn rat_mat_apply(m: &RatMat2, v: &Vec2) -> Vec2 {
    [
        &m[0][0] * &v[0] + &m[0][1] * &v[1],
        &m[1][0] * &v[0] + &m[1][1] * &v[1],
    ]
}

pub fn rat_mat_det(m: &RatMat2) -> Rat {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

pub fn rat_mat_inverse(m: &RatMat2) -> RatMat2 {
    let d = rat_mat_det(m);
    assert!(!d.is_zero(), "singular matrix");
    [
        [&m[1][1] / &d, -&m[0][1] / &d],
        [-&m[1][0] / &d, &m[0][0] / &d],
    ]
}

pub fn rat_mat_mul(a: &RatMat2, b: &RatMat2) -> RatMat2 {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn rat_mat_of(m: &Mat2) -> RatMat2 {
    let r = |x: i64| Rat::from_integer(Int::from(x));
    [[r(m.0[0][0]), r(m.0[0][1])], [r(m.0[1][0]), r(m.0[1][1])]]
}

/// An integral matrix from a rational one, if all entries are integers.
pub fn rat_mat_to_mat2(m: &RatMat2) -> Option<Mat2> {
    let mut out = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            if !m[i][j].is_integer() {
                return None;
            }
            out[i][j] = i64::try_from(m[i][j].to_integer()).ok()?;
        }
    }
    Some(Mat2(out))
}

fn frac(x: &Rat) -> Rat {
    x - x.floor()
}

/// A planar crystallographic group in the affine model.
#[derive(Clone)]
pub struct CrystalGroup {
    /// Columns generate the translation lattice (HNF-canonical basis).
    lattice: [Vec2; 2],
    holonomy: PointGroup,
    /// `t_M` reduced into the half-open fundamental cell of the lattice.
    vector_system: BTreeMap<Mat2, Vec2>,
    generators: Vec<AffineElement>,
}

impl PartialEq for CrystalGroup {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice
            && self.holonomy.same_elements(&other.holonomy)
            && self.vector_system == other.vector_system
    }
}

impl Eq for CrystalGroup {}

impl fmt::Debug for CrystalGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CrystalGroup")
            .field("lattice", &[fmt_vec(&self.lattice[0]), fmt_vec(&self.lattice[1])])
            .field(
                "vector_system",
                &self
                    .vector_system
                    .iter()
                    .map(|(m, t)| format!("{m} -> {}", fmt_vec(t)))
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl Serialize for CrystalGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CrystalGroup", 4)?;
        st.serialize_field(
            "lattice_basis",
            &[vec_strings(&self.lattice[0]), vec_strings(&self.lattice[1])],
        )?;
        st.serialize_field("holonomy", self.holonomy.elements())?;
        let vs: Vec<(Mat2, [String; 2])> = self
            .vector_system
            .iter()
            .map(|(m, t)| (*m, vec_strings(t)))
            .collect();
        st.serialize_field("vector_system", &vs)?;
        st.serialize_field("generators", &self.generators)?;
        st.end()
    }
}

/// Canonical basis of the lattice spanned by rational vectors, as rows of
/// the Hermite normal form after clearing denominators.
fn rational_lattice_basis(vectors: &[Vec2]) -> Vec<Vec2> {
    let mut denom = Int::one();
    for v in vectors {
        for x in v {
            denom = denom.lcm(x.denom());
        }
    }
    let scaled: Vec<Vec<Int>> = vectors
        .iter()
        .map(|v| v.iter().map(|x| (x * Rat::from_integer(denom.clone())).to_integer()).collect())
        .collect();
    lattice_basis(&scaled, 2)
        .into_iter()
        .map(|row| {
            [
                Rat::new(row[0].clone(), denom.clone()),
                Rat::new(row[1].clone(), denom.clone()),
            ]
        })
        .collect()
}

const FRONTIER_CAP: usize = 10_000;

/// Builds the group generated by `gens`. Lifts of the holonomy elements are
/// found along a breadth-first spanning tree; the translation lattice is the
/// span of the Schreier generators `h_M g h_{Mg}^-1`.
pub fn group_from_generators(gens: &[AffineElement]) -> Result<CrystalGroup> {
    if gens.is_empty() {
        return Err(Error::LatticeDeficient { rank: 0 });
    }
    let linear: Vec<Mat2> = gens.iter().map(|g| g.linear).collect();
    let holonomy = close_point_group(&linear).map_err(|_| Error::HolonomyUnbounded)?;
    let mut lifts: BTreeMap<Mat2, AffineElement> = BTreeMap::new();
    lifts.insert(Mat2::IDENTITY, AffineElement::identity());
    let mut queue = VecDeque::from([Mat2::IDENTITY]);
    let mut translations: Vec<Vec2> = Vec::new();
    let mut steps = 0usize;
    while let Some(m) = queue.pop_front() {
        let h = lifts[&m].clone();
        for g in gens {
            steps += 1;
            if steps > FRONTIER_CAP {
                return Err(Error::HolonomyUnbounded);
            }
            let product = h.compose(g);
            match lifts.get(&product.linear) {
                Some(existing) => {
                    let schreier = product.compose(&existing.inverse());
                    debug_assert!(schreier.is_translation());
                    if !vec_is_zero(&schreier.translation) {
                        translations.push(schreier.translation);
                    }
                }
                None => {
                    let lin = product.linear;
                    lifts.insert(lin, product);
                    queue.push_back(lin);
                }
            }
        }
    }
    let basis = rational_lattice_basis(&translations);
    if basis.len() < 2 {
        return Err(Error::LatticeDeficient { rank: basis.len() });
    }
    let lattice = [basis[0].clone(), basis[1].clone()];
    let mut group = CrystalGroup {
        lattice,
        holonomy,
        vector_system: BTreeMap::new(),
        generators: gens.to_vec(),
    };
    for (m, h) in lifts {
        let t = group.reduce(&h.translation);
        group.vector_system.insert(m, t);
    }
    Ok(group)
}

impl CrystalGroup {
    pub fn lattice_basis(&self) -> &[Vec2; 2] {
        &self.lattice
    }

    /// Columns are the lattice basis vectors.
    pub fn lattice_matrix(&self) -> RatMat2 {
        rat_mat_from_columns(&self.lattice[0], &self.lattice[1])
    }

    pub fn holonomy(&self) -> &PointGroup {
        &self.holonomy
    }

    pub fn vector_system(&self) -> &BTreeMap<Mat2, Vec2> {
        &self.vector_system
    }

    pub fn generators(&self) -> &[AffineElement] {
        &self.generators
    }

    pub fn translation_part(&self, m: &Mat2) -> Option<&Vec2> {
        self.vector_system.get(m)
    }

    /// The lift `(M, t_M)` of a holonomy element.
    pub fn lift(&self, m: &Mat2) -> Option<AffineElement> {
        self.vector_system
            .get(m)
            .map(|t| AffineElement::new(*m, t.clone()))
    }

    /// Coordinates of `v` with respect to the lattice basis.
    pub fn lattice_coordinates(&self, v: &Vec2) -> Vec2 {
        rat_mat_apply(&rat_mat_inverse(&self.lattice_matrix()), v)
    }

    pub fn in_lattice(&self, v: &Vec2) -> bool {
        vec_is_integral(&self.lattice_coordinates(v))
    }

    /// Representative of `v` modulo the lattice in the half-open cell.
    pub fn reduce(&self, v: &Vec2) -> Vec2 {
        let c = self.lattice_coordinates(v);
        let f = [frac(&c[0]), frac(&c[1])];
        rat_mat_apply(&self.lattice_matrix(), &f)
    }

    pub fn contains(&self, g: &AffineElement) -> bool {
        match self.vector_system.get(&g.linear) {
            Some(t) => self.in_lattice(&vec_sub(&g.translation, t)),
            None => false,
        }
    }

    pub fn is_standard_lattice(&self) -> bool {
        self.lattice == [crate::mat2::vec_from_ints(1, 0), crate::mat2::vec_from_ints(0, 1)]
    }

    /// The same group in coordinates where the lattice is `Z^2`: conjugation
    /// by `x -> L^-1 x`, `L` the lattice matrix. Returns the group and `L`.
    pub fn rebase(&self) -> (CrystalGroup, RatMat2) {
        let l = self.lattice_matrix();
        let li = rat_mat_inverse(&l);
        let conj = |g: &AffineElement| {
            let m = rat_mat_mul(&rat_mat_mul(&li, &rat_mat_of(&g.linear)), &l);
            AffineElement::new(
                rat_mat_to_mat2(&m).expect("lattice is invariant under the holonomy"),
                rat_mat_apply(&li, &g.translation),
            )
        };
        let mut gens: Vec<AffineElement> = self.generators.iter().map(conj).collect();
        gens.push(AffineElement::translation(crate::mat2::vec_from_ints(1, 0)));
        gens.push(AffineElement::translation(crate::mat2::vec_from_ints(0, 1)));
        let mut g = group_from_generators(&gens).expect("rebased group is crystallographic");
        g.generators.truncate(self.generators.len());
        (g, l)
    }

    /// The group conjugated by `u`: generators `u g u^-1`.
    pub fn conjugate(&self, u: &AffineElement) -> CrystalGroup {
        let mut gens: Vec<AffineElement> = self.generators.iter().map(|g| u.conjugate(g)).collect();
        for b in &self.lattice {
            gens.push(AffineElement::translation(u.linear.apply(b)));
        }
        let mut g = group_from_generators(&gens).expect("conjugate group is crystallographic");
        g.generators.truncate(self.generators.len());
        g
    }

    /// Generating set: the lattice basis followed by one lift per generator
    /// of the holonomy.
    pub fn standard_generators(&self) -> Vec<AffineElement> {
        let mut gens: Vec<AffineElement> = self
            .lattice
            .iter()
            .map(|b| AffineElement::translation(b.clone()))
            .collect();
        for m in self.holonomy.minimal_generators() {
            gens.push(self.lift(&m).unwrap());
        }
        gens
    }

    /// Replaces the recorded generators (the group itself is unchanged).
    pub fn with_generators(mut self, gens: Vec<AffineElement>) -> CrystalGroup {
        debug_assert!(gens.iter().all(|g| self.contains(g)));
        self.generators = gens;
        self
    }

    /// The translations fixed by the whole holonomy.
    pub fn center(&self) -> Vec<Vec2> {
        if self.holonomy.order() == 1 {
            return self.lattice.to_vec();
        }
        let (rebased, l) = self.rebase();
        let mut rows: Vec<Vec<Int>> = Vec::new();
        for m in rebased.holonomy.elements() {
            let d = m.sub_identity();
            for r in d.0 {
                rows.push(r.iter().map(|&x| Int::from(x)).collect());
            }
        }
        let a = IntMatrix::from_int_rows(rows);
        let zero = vec![Int::zero(); a.rows()];
        let sol = integer_solve(&a, &zero);
        sol.homogeneous_basis
            .iter()
            .map(|v| {
                let w = [Rat::from_integer(v[0].clone()), Rat::from_integer(v[1].clone())];
                rat_mat_apply(&l, &w)
            })
            .collect()
    }

    pub fn finite_subgroup_spectrum(&self) -> LocalGroupSpectrum {
        finite_subgroup_spectrum(self)
    }

    /// Cocycle condition `t_M + M t_N - t_MN` in the lattice for all pairs.
    pub fn satisfies_cocycle_condition(&self) -> bool {
        let hol = self.holonomy.elements();
        hol.iter().all(|m| {
            hol.iter().all(|n| {
                let v = vec_sub(
                    &vec_add(&self.vector_system[m], &m.apply(&self.vector_system[n])),
                    &self.vector_system[&(*m * *n)],
                );
                self.in_lattice(&v)
            })
        })
    }

    /// All elements `(M, t_M + a b1 + b b2)` with `|a|, |b| <= bound`.
    pub fn elements_within(&self, bound: i64) -> Vec<AffineElement> {
        let mut out = Vec::new();
        for m in self.holonomy.elements() {
            for a in -bound..=bound {
                for b in -bound..=bound {
                    let shift = vec_add(
                        &scale(&self.lattice[0], a),
                        &scale(&self.lattice[1], b),
                    );
                    out.push(AffineElement::new(*m, vec_add(&self.vector_system[m], &shift)));
                }
            }
        }
        out
    }
}

fn scale(v: &Vec2, k: i64) -> Vec2 {
    let k = Rat::from_integer(Int::from(k));
    [&v[0] * &k, &v[1] * &k]
}

pub fn membership(g: &AffineElement, group: &CrystalGroup) -> bool {
    group.contains(g)
}

pub fn center(group: &CrystalGroup) -> Vec<Vec2> {
    group.center()
}

/// Cone points, reflector curves and corner reflectors of the quotient
/// orbifold, read off from the point stabilizers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalGroupSpectrum {
    pub cone_orders: Vec<u32>,
    pub has_reflection: bool,
    pub corner_orders: Vec<u32>,
}

impl LocalGroupSpectrum {
    /// Orders of all rotation subgroups present, cones and corners alike.
    pub fn rotation_orders(&self) -> BTreeSet<u32> {
        self.cone_orders.iter().chain(&self.corner_orders).copied().collect()
    }
}

fn reduce_unit(p: &Vec2) -> Vec2 {
    [frac(&p[0]), frac(&p[1])]
}

/// Holonomy elements whose lift (with some lattice translation) fixes `p`;
/// the lattice is `Z^2`.
fn stabilizer(g: &CrystalGroup, p: &Vec2) -> Vec<Mat2> {
    g.holonomy
        .elements()
        .iter()
        .filter(|m| {
            let moved = vec_add(&m.apply(p), &g.vector_system[*m]);
            vec_is_integral(&vec_sub(p, &moved))
        })
        .copied()
        .collect()
}

pub fn finite_subgroup_spectrum(group: &CrystalGroup) -> LocalGroupSpectrum {
    let (g, _) = group.rebase();
    // Candidate points: fixed points of all lifts of the rotations, mod Z^2.
    let mut points: BTreeSet<Vec2> = BTreeSet::new();
    for m in g.holonomy.elements() {
        if m.det() != 1 || *m == Mat2::IDENTITY {
            continue;
        }
        let imr = rat_mat_inverse(&rat_mat_of(&m.sub_identity().neg()));
        let d = 2 - m.trace();
        for a in 0..d {
            for b in 0..d {
                let rhs = vec_add(&g.vector_system[m], &crate::mat2::vec_from_ints(a, b));
                points.insert(reduce_unit(&rat_mat_apply(&imr, &rhs)));
            }
        }
    }
    let mut seen: BTreeSet<Vec2> = BTreeSet::new();
    let mut cones = Vec::new();
    let mut corners = Vec::new();
    for p in &points {
        if seen.contains(p) {
            continue;
        }
        for m in g.holonomy.elements() {
            let q = reduce_unit(&vec_add(&m.apply(p), &g.vector_system[m]));
            seen.insert(q);
        }
        let stab = stabilizer(&g, p);
        let n = stab.len() as u32;
        if stab.iter().all(|m| m.det() == 1) {
            cones.push(n);
        } else {
            corners.push(n / 2);
        }
    }
    let has_reflection = g.holonomy.elements().iter().any(|m| {
        if m.det() != -1 {
            return false;
        }
        let ip = m.add_identity();
        let t = ip.apply(&g.vector_system[m]);
        if !vec_is_integral(&t) {
            return false;
        }
        let rhs: Vec<Int> = t.iter().map(|x| -x.to_integer()).collect();
        !integer_solve(&ip.to_int_matrix(), &rhs).is_empty()
    });
    cones.sort_unstable();
    corners.sort_unstable();
    LocalGroupSpectrum {
        cone_orders: cones,
        has_reflection,
        corner_orders: corners,
    }
}

/// Parses generator lines `gen <name> = [[a,b],[c,d]] + (p/q, r/s)`; blank
/// lines and `#` comments are skipped. The translation part may be omitted.
pub fn parse_generators(text: &str) -> Result<Vec<(String, AffineElement)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor {
            s: line,
            pos: 0,
            line: line_no,
        };
        cur.skip_ws();
        cur.keyword("gen")?;
        cur.skip_ws();
        let name = cur.ident()?;
        cur.skip_ws();
        cur.expect('=')?;
        let m = cur.matrix()?;
        cur.skip_ws();
        let t = if cur.peek() == Some('+') {
            cur.expect('+')?;
            cur.vector()?
        } else {
            zero_vec()
        };
        cur.skip_ws();
        if cur.peek().is_some() {
            return Err(cur.error("unexpected trailing input"));
        }
        if !m.is_unimodular() {
            return Err(Error::Parse {
                line: line_no,
                column: 1,
                message: format!("matrix {m} is not in GL(2,Z)"),
            });
        }
        out.push((name, AffineElement::new(m, t)));
    }
    Ok(out)
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
    line: usize,
}

impl Cursor<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            line: self.line,
            column: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.s[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        if self.s[self.pos..].starts_with(kw) {
            self.pos += kw.len();
            Ok(())
        } else {
            Err(self.error(&format!("expected `{kw}`")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.error("expected a generator name"));
        }
        Ok(self.s[start..self.pos].to_string())
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.s[start..self.pos]
            .parse()
            .map_err(|_| Cursor { pos: start, ..*self }.error("expected an integer"))
    }

    fn rational(&mut self) -> Result<Rat> {
        let n = self.integer()?;
        self.skip_ws();
        if self.peek() == Some('/') {
            self.pos += 1;
            let at = self.pos;
            let d = self.integer()?;
            if d == 0 {
                return Err(Cursor { pos: at, ..*self }.error("zero denominator"));
            }
            Ok(Rat::new(Int::from(n), Int::from(d)))
        } else {
            Ok(Rat::from_integer(Int::from(n)))
        }
    }

    fn matrix(&mut self) -> Result<Mat2> {
        self.expect('[')?;
        let mut rows = [[0i64; 2]; 2];
        for (i, row) in rows.iter_mut().enumerate() {
            if i > 0 {
                self.expect(',')?;
            }
            self.expect('[')?;
            row[0] = self.integer()?;
            self.expect(',')?;
            row[1] = self.integer()?;
            self.expect(']')?;
        }
        self.expect(']')?;
        Ok(Mat2(rows))
    }

    fn vector(&mut self) -> Result<Vec2> {
        self.expect('(')?;
        let a = self.rational()?;
        self.expect(',')?;
        let b = self.rational()?;
        self.expect(')')?;
        Ok([a, b])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::{A, AR, NEG_I};
    use crate::linalg::rat;
    use crate::mat2::vec_from_ints;

    fn half(x: i64, y: i64) -> Vec2 {
        [rat(x, 2), rat(y, 2)]
    }

    #[test]
    fn compose_examples() {
        let x = AffineElement::translation(vec_from_ints(1, 0));
        let y = AffineElement::translation(vec_from_ints(0, 1));
        assert_eq!(x.compose(&y), AffineElement::translation(vec_from_ints(1, 1)));
        let d = AffineElement::new(AR, half(1, 0));
        assert_eq!(d.compose(&d), x);
        let j = AffineElement::new(NEG_I, half(1, 1));
        assert!(j.compose(&j).is_identity());
        assert_eq!(d.inverse(), AffineElement::new(AR, half(-1, 0)));
        assert!(d.compose(&d.inverse()).is_identity());
    }

    #[test]
    fn build_p2_and_pg() {
        let x = AffineElement::translation(vec_from_ints(1, 0));
        let y = AffineElement::translation(vec_from_ints(0, 1));
        let p2 = group_from_generators(&[x.clone(), y.clone(), AffineElement::linear(NEG_I)]).unwrap();
        assert!(p2.is_standard_lattice());
        assert_eq!(p2.holonomy().order(), 2);
        assert_eq!(p2.translation_part(&NEG_I), Some(&zero_vec()));

        let d = AffineElement::new(AR, half(1, 0));
        let pg = group_from_generators(&[d, y]).unwrap();
        assert!(pg.is_standard_lattice());
        assert_eq!(pg.translation_part(&AR), Some(&half(1, 0)));
        assert!(pg.contains(&x));
        assert!(!pg.contains(&AffineElement::translation(half(1, 0))));
        assert_eq!(pg.center(), vec![vec_from_ints(1, 0)]);
    }

    #[test]
    fn deficient_lattice() {
        assert_eq!(
            group_from_generators(&[AffineElement::linear(A)]),
            Err(Error::LatticeDeficient { rank: 0 })
        );
        let shear = Mat2::new(1, 1, 0, 1);
        assert_eq!(
            group_from_generators(&[AffineElement::linear(shear)]),
            Err(Error::HolonomyUnbounded)
        );
    }

    #[test]
    fn cm_center_is_diagonal() {
        let r = AffineElement::linear(crate::holonomy::R);
        let x = AffineElement::translation(vec_from_ints(1, 0));
        let cm = group_from_generators(&[r, x]).unwrap();
        assert_eq!(cm.center(), vec![vec_from_ints(1, 1)]);
    }

    #[test]
    fn rational_lattice_is_rebased() {
        let g = group_from_generators(&[
            AffineElement::translation(half(1, 0)),
            AffineElement::translation(half(0, 1)),
            AffineElement::new(NEG_I, half(1, 0)),
        ])
        .unwrap();
        assert_eq!(g.lattice_basis(), &[half(1, 0), half(0, 1)]);
        let (r, _) = g.rebase();
        assert!(r.is_standard_lattice());
        assert_eq!(r.translation_part(&NEG_I), Some(&zero_vec()));
    }

    #[test]
    fn spectra() {
        let x = AffineElement::translation(vec_from_ints(1, 0));
        let y = AffineElement::translation(vec_from_ints(0, 1));
        let p2 = group_from_generators(&[x.clone(), y.clone(), AffineElement::linear(NEG_I)]).unwrap();
        assert_eq!(
            p2.finite_subgroup_spectrum(),
            LocalGroupSpectrum {
                cone_orders: vec![2, 2, 2, 2],
                has_reflection: false,
                corner_orders: vec![]
            }
        );
        let pgg = group_from_generators(&[
            AffineElement::new(AR, half(1, 0)),
            AffineElement::new(NEG_I, half(1, 1)),
        ])
        .unwrap();
        assert_eq!(
            pgg.finite_subgroup_spectrum(),
            LocalGroupSpectrum {
                cone_orders: vec![2, 2],
                has_reflection: false,
                corner_orders: vec![]
            }
        );
    }

    #[test]
    fn parse_generator_file() {
        let text = "# pgg\ngen d = [[1,0],[0,-1]] + (1/2, 0)\n\ngen j = [[-1,0],[0,-1]] + (1/2, 1/2)\n";
        let gens = parse_generators(text).unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[0].0, "d");
        assert_eq!(gens[1].1, AffineElement::new(NEG_I, half(1, 1)));
        match parse_generators("gen d = [[1,0],[0,-1] + (1/2, 0)") {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(parse_generators("gen s = [[2,0],[0,1]]").is_err());
    }
}
