//! Second cohomology of a finite `G <= GL(2, Z)` with coefficients in the
//! lattice `Z^2` (twisted by the inclusion), on normalized bar cochains.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::affine::{group_from_generators, AffineElement, CrystalGroup};
use crate::error::{Error, Result};
use crate::holonomy::{close_point_group, PointGroup, AR, NEG_I};
use crate::linalg::{smith_normal_form, Int, IntMatrix, Rat};
use crate::mat2::{vec_add, vec_from_ints, vec_sub, Mat2, Vec2};

/// A normalized 2-cochain `H x H -> Z^2` (values at pairs involving the
/// identity are zero and are not stored).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cocycle2 {
    pub point_group: PointGroup,
    pub values: BTreeMap<(Mat2, Mat2), [i64; 2]>,
}

impl Cocycle2 {
    pub fn zero(h: &PointGroup) -> Cocycle2 {
        Cocycle2 {
            point_group: h.clone(),
            values: BTreeMap::new(),
        }
    }

    pub fn value(&self, g: &Mat2, h: &Mat2) -> [i64; 2] {
        self.values.get(&(*g, *h)).copied().unwrap_or([0, 0])
    }

    fn from_vector(h: &PointGroup, v: &[Int]) -> Cocycle2 {
        let nontrivial = &h.elements()[1..];
        let mut values = BTreeMap::new();
        for (a, g) in nontrivial.iter().enumerate() {
            for (b, k) in nontrivial.iter().enumerate() {
                let i = c2_index(nontrivial.len(), a, b);
                let val = [v[i].to_i64().unwrap(), v[i + 1].to_i64().unwrap()];
                if val != [0, 0] {
                    values.insert((*g, *k), val);
                }
            }
        }
        Cocycle2 {
            point_group: h.clone(),
            values,
        }
    }

    fn to_vector(&self) -> Vec<Int> {
        let nontrivial = &self.point_group.elements()[1..];
        let m = nontrivial.len();
        let mut v = vec![Int::zero(); 2 * m * m];
        for (a, g) in nontrivial.iter().enumerate() {
            for (b, k) in nontrivial.iter().enumerate() {
                let val = self.value(g, k);
                let i = c2_index(m, a, b);
                v[i] = Int::from(val[0]);
                v[i + 1] = Int::from(val[1]);
            }
        }
        v
    }

    /// First triple (as element indices) at which the cocycle identity
    /// fails, if any.
    pub fn cocycle_defect(&self) -> Option<(usize, usize, usize)> {
        let els = self.point_group.elements();
        for (a, g) in els.iter().enumerate() {
            for (b, h) in els.iter().enumerate() {
                for (c, k) in els.iter().enumerate() {
                    let lhs = add(
                        &sub(&g.apply_int(self.value(h, k)), &self.value(&(*g * *h), k)),
                        &sub(&self.value(g, &(*h * *k)), &self.value(g, h)),
                    );
                    if lhs != [0, 0] {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_cocycle(&self) -> bool {
        self.cocycle_defect().is_none()
    }

    pub fn add(&self, other: &Cocycle2) -> Cocycle2 {
        let mut values = self.values.clone();
        for (k, v) in &other.values {
            let e = values.entry(*k).or_insert([0, 0]);
            *e = add(e, v);
        }
        values.retain(|_, v| *v != [0, 0]);
        Cocycle2 {
            point_group: self.point_group.clone(),
            values,
        }
    }

    /// Coboundary of a normalized 1-cochain `f`.
    pub fn coboundary(h: &PointGroup, f: &BTreeMap<Mat2, [i64; 2]>) -> Cocycle2 {
        let get = |m: &Mat2| f.get(m).copied().unwrap_or([0, 0]);
        let mut values = BTreeMap::new();
        for g in &h.elements()[1..] {
            for k in &h.elements()[1..] {
                let v = add(&sub(&g.apply_int(get(k)), &get(&(*g * *k))), &get(g));
                if v != [0, 0] {
                    values.insert((*g, *k), v);
                }
            }
        }
        Cocycle2 {
            point_group: h.clone(),
            values,
        }
    }

    /// Restriction to a subgroup.
    pub fn restrict(&self, sub: &PointGroup) -> Cocycle2 {
        let values = self
            .values
            .iter()
            .filter(|((g, h), _)| sub.contains(g) && sub.contains(h))
            .map(|(k, v)| (*k, *v))
            .collect();
        Cocycle2 {
            point_group: sub.clone(),
            values,
        }
    }
}

fn add(a: &[i64; 2], b: &[i64; 2]) -> [i64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

fn sub(a: &[i64; 2], b: &[i64; 2]) -> [i64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn c2_index(m: usize, a: usize, b: usize) -> usize {
    2 * (a * m + b)
}

/// Matrix of `d^1: C^1 -> C^2` (rows: `C^2` coordinates).
pub fn d1_matrix(h: &PointGroup) -> IntMatrix {
    let els = h.elements();
    let m = els.len() - 1;
    let mut d = IntMatrix::zeros(2 * m * m, 2 * m);
    // d f(g, k) = g f(k) - f(gk) + f(g)
    for a in 0..m {
        let g = els[a + 1];
        for b in 0..m {
            let k = els[b + 1];
            let row = c2_index(m, a, b);
            for r in 0..2 {
                for s in 0..2 {
                    d[(row + r, 2 * b + s)] += Int::from(g.0[r][s]);
                }
                d[(row + r, 2 * a + r)] += Int::from(1);
                let gk = g * k;
                if gk != Mat2::IDENTITY {
                    let c = h.index_of(&gk).unwrap() - 1;
                    d[(row + r, 2 * c + r)] -= Int::from(1);
                }
            }
        }
    }
    d
}

/// Matrix of `d^2: C^2 -> C^3` (rows: `C^3` coordinates).
pub fn d2_matrix(h: &PointGroup) -> IntMatrix {
    let els = h.elements();
    let m = els.len() - 1;
    let idx = |x: &Mat2| h.index_of(x).unwrap();
    let mut d = IntMatrix::zeros(2 * m * m * m, 2 * m * m);
    // d c(g, k, l) = g c(k, l) - c(gk, l) + c(g, kl) - c(g, k)
    for a in 0..m {
        let g = els[a + 1];
        for b in 0..m {
            let k = els[b + 1];
            for c in 0..m {
                let l = els[c + 1];
                let row = 2 * ((a * m + b) * m + c);
                for r in 0..2 {
                    for s in 0..2 {
                        d[(row + r, c2_index(m, b, c) + s)] += Int::from(g.0[r][s]);
                    }
                    let gk = g * k;
                    if gk != Mat2::IDENTITY {
                        d[(row + r, c2_index(m, idx(&gk) - 1, c) + r)] -= Int::from(1);
                    }
                    let kl = k * l;
                    if kl != Mat2::IDENTITY {
                        d[(row + r, c2_index(m, a, idx(&kl) - 1) + r)] += Int::from(1);
                    }
                    d[(row + r, c2_index(m, a, b) + r)] -= Int::from(1);
                }
            }
        }
    }
    d
}

/// `H^2(H; Z^2)` as a finite abelian group with explicit basis cocycles.
#[derive(Clone, Debug, Serialize)]
pub struct CohomologyClassGroup {
    pub point_group: PointGroup,
    pub invariant_factors: Vec<u64>,
    pub basis_cocycles: Vec<Cocycle2>,
    /// `U` of the Smith decomposition of `d^1`, restricted to the torsion rows.
    #[serde(skip)]
    coordinate_rows: Vec<Vec<Int>>,
    /// Change of basis applied after reading Smith coordinates.
    #[serde(skip)]
    basis_change: Option<Vec<Vec<i64>>>,
}

impl CohomologyClassGroup {
    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    /// Coordinates of the class of `c`, each reduced modulo the matching
    /// invariant factor.
    pub fn coordinates(&self, c: &Cocycle2) -> Vec<u64> {
        let v = c.to_vector();
        let raw: Vec<i64> = self
            .coordinate_rows
            .iter()
            .zip(&self.invariant_factors)
            .map(|(row, &n)| {
                let dot: Int = row.iter().zip(&v).map(|(a, b)| a * b).sum();
                dot.mod_floor(&Int::from(n)).to_i64().unwrap()
            })
            .collect();
        match &self.basis_change {
            None => raw.into_iter().map(|x| x as u64).collect(),
            Some(p) => p
                .iter()
                .zip(&self.invariant_factors)
                .map(|(row, &n)| {
                    let s: i64 = row.iter().zip(&raw).map(|(a, b)| a * b).sum();
                    s.rem_euclid(n as i64) as u64
                })
                .collect(),
        }
    }

    /// All elements of the class group, as coordinate vectors in
    /// lexicographic order.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &n in &self.invariant_factors {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..n).map(move |k| {
                        let mut w = v.clone();
                        w.push(k);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// A cocycle with the given coordinates.
    pub fn cocycle_for(&self, coords: &[u64]) -> Cocycle2 {
        assert_eq!(coords.len(), self.basis_cocycles.len());
        let mut c = Cocycle2::zero(&self.point_group);
        for (k, b) in coords.iter().zip(&self.basis_cocycles) {
            for _ in 0..*k {
                c = c.add(b);
            }
        }
        c
    }

    /// Replaces the basis by the classes of `cocycles` (which must form a
    /// basis of an elementary abelian 2-group).
    fn rebase_elementary_2(&mut self, cocycles: Vec<Cocycle2>) {
        assert!(self.invariant_factors.iter().all(|&n| n == 2));
        let n = cocycles.len();
        // columns: Smith coordinates of the new basis
        let cols: Vec<Vec<u64>> = cocycles.iter().map(|c| self.coordinates(c)).collect();
        let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| cols[j][i] as i64).collect()).collect();
        let mut inv: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        for col in 0..n {
            let p = (col..n).find(|&r| m[r][col] % 2 != 0).expect("new basis is independent");
            m.swap(col, p);
            inv.swap(col, p);
            for r in 0..n {
                if r != col && m[r][col] % 2 != 0 {
                    for k in 0..n {
                        m[r][k] = (m[r][k] + m[col][k]) % 2;
                        inv[r][k] = (inv[r][k] + inv[col][k]) % 2;
                    }
                }
            }
        }
        self.basis_change = Some(inv);
        self.basis_cocycles = cocycles;
    }
}

pub fn h2_of_point_group(h: &PointGroup) -> CohomologyClassGroup {
    if h.order() == 1 {
        return CohomologyClassGroup {
            point_group: h.clone(),
            invariant_factors: Vec::new(),
            basis_cocycles: Vec::new(),
            coordinate_rows: Vec::new(),
            basis_change: None,
        };
    }
    // ker d^2 is saturated and contains im d^1 with finite index, so
    // H^2 is the torsion subgroup of coker d^1.
    let d1 = d1_matrix(h);
    let snf = smith_normal_form(&d1);
    let mut invariant_factors = Vec::new();
    let mut basis_cocycles = Vec::new();
    let mut coordinate_rows = Vec::new();
    for i in 0..snf.rank {
        let f = &snf.invariant_factors[i];
        if f > &Int::from(1) {
            invariant_factors.push(f.to_u64().unwrap());
            coordinate_rows.push(snf.u.row(i).to_vec());
            basis_cocycles.push(Cocycle2::from_vector(h, &snf.u_inverse.column(i)));
        }
    }
    let mut group = CohomologyClassGroup {
        point_group: h.clone(),
        invariant_factors,
        basis_cocycles,
        coordinate_rows,
        basis_change: None,
    };
    let standard_axes = close_point_group(&[NEG_I, AR]).unwrap();
    if h.same_elements(&standard_axes) && group.invariant_factors == [2, 2] {
        // Coordinates (e, f): d = lift of AR, j = lift of -I with
        // d^2 = x^f and (jd)^2 = y^e.
        let e_class = group_cocycle(&ef_group(1, 0));
        let f_class = group_cocycle(&ef_group(0, 1));
        group.rebase_elementary_2(vec![
            e_class.restrict_to_order(h),
            f_class.restrict_to_order(h),
        ]);
    }
    group
}

impl Cocycle2 {
    /// The same cochain indexed by the element order of `h` (which must have
    /// the same elements).
    fn restrict_to_order(&self, h: &PointGroup) -> Cocycle2 {
        Cocycle2 {
            point_group: h.clone(),
            values: self.values.clone(),
        }
    }
}

/// The extension with lifts `d = (AR, (f/2, 0))` and `j = (-I, (f/2, e/2))`.
pub fn ef_group(e: i64, f: i64) -> CrystalGroup {
    let half = |k: i64| Rat::new(Int::from(k), Int::from(2));
    let d = AffineElement::new(AR, [half(f), half(0)]);
    let j = AffineElement::new(NEG_I, [half(f), half(e)]);
    let x = AffineElement::translation(vec_from_ints(1, 0));
    let y = AffineElement::translation(vec_from_ints(0, 1));
    group_from_generators(&[x, y, d, j]).expect("extension of <-I, AR> by Z^2")
}

/// `(e, f)` invariants of a group with holonomy exactly `<-I, AR>` and
/// lattice `Z^2`: `f = 2 t_AR[0]`, `e = 2 t_{-AR}[1]` modulo 2.
pub fn ef_invariants(g: &CrystalGroup) -> Option<(u64, u64)> {
    let standard_axes = close_point_group(&[NEG_I, AR]).unwrap();
    if !g.is_standard_lattice() || !g.holonomy().same_elements(&standard_axes) {
        return None;
    }
    let two = Rat::from_integer(Int::from(2));
    let f = (&g.vector_system()[&AR][0] * &two).to_integer();
    let e = (&g.vector_system()[&AR.neg()][1] * &two).to_integer();
    Some((
        e.mod_floor(&Int::from(2)).to_u64().unwrap(),
        f.mod_floor(&Int::from(2)).to_u64().unwrap(),
    ))
}

/// The integral cocycle `c(M, N) = t_M + M t_N - t_MN` of a group whose
/// lattice is `Z^2`.
pub fn group_cocycle(g: &CrystalGroup) -> Cocycle2 {
    assert!(g.is_standard_lattice(), "rebase the group first");
    let h = g.holonomy();
    let t = g.vector_system();
    let mut values = BTreeMap::new();
    for m in &h.elements()[1..] {
        for n in &h.elements()[1..] {
            let v: Vec2 = vec_sub(&vec_add(&t[m], &m.apply(&t[n])), &t[&(*m * *n)]);
            let val = [
                v[0].to_integer().to_i64().unwrap(),
                v[1].to_integer().to_i64().unwrap(),
            ];
            debug_assert!(v[0].is_integer() && v[1].is_integer());
            if val != [0, 0] {
                values.insert((*m, *n), val);
            }
        }
    }
    Cocycle2 {
        point_group: h.clone(),
        values,
    }
}

/// The extension of `c.point_group` by `Z^2` with cocycle `c`. Lifts are
/// `t_M = (1/|H|) sum_N c(M, N)`, which satisfy `t_M + M t_N - t_MN =
/// c(M, N)` exactly.
pub fn extension_from_cocycle(c: &Cocycle2) -> Result<CrystalGroup> {
    if let Some((a, b, k)) = c.cocycle_defect() {
        return Err(Error::InvalidCocycle(a, b, k));
    }
    let h = &c.point_group;
    let n = Int::from(h.order() as i64);
    let mut gens = vec![
        AffineElement::translation(vec_from_ints(1, 0)),
        AffineElement::translation(vec_from_ints(0, 1)),
    ];
    for m in h.minimal_generators() {
        let mut s = [0i64, 0];
        for k in h.elements() {
            s = add(&s, &c.value(&m, k));
        }
        let t = [
            Rat::new(Int::from(s[0]), n.clone()),
            Rat::new(Int::from(s[1]), n.clone()),
        ];
        gens.push(AffineElement::new(m, t));
    }
    let g = group_from_generators(&gens)?;
    debug_assert!(g.is_standard_lattice());
    Ok(g)
}

/// Coordinates of the extension class of `g` in `H^2` of its holonomy
/// (after rebasing the lattice to `Z^2`).
pub fn class_of_group(g: &CrystalGroup) -> (CohomologyClassGroup, Vec<u64>) {
    let (r, _) = g.rebase();
    let h2 = h2_of_point_group(r.holonomy());
    let coords = h2.coordinates(&group_cocycle(&r));
    (h2, coords)
}

pub fn restriction_is_trivial(sub: &PointGroup, c: &Cocycle2) -> bool {
    assert!(sub.is_subgroup_of(&c.point_group));
    let r = c.restrict(sub);
    h2_of_point_group(sub).coordinates(&r).iter().all(|x| *x == 0)
}
