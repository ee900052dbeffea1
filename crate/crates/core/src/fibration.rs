//! Fibrations of the flat 2-orbifolds over the circle and over the
//! reflector interval, found from the holonomy-invariant lattice directions.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::affine::{AffineElement, CrystalGroup};
use crate::catalog::{entry, standard_group, WallpaperClass};
use crate::cohomology::class_of_group;
use crate::holonomy::unimodular_matrices;
use crate::linalg::{rat, Rat};
use crate::mat2::{vec_add, vec_from_ints, vec_sub, Mat2, Vec2};

/// Primitive integer vector with first nonzero coordinate positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct InvariantDirection {
    pub w: [i64; 2],
}

impl InvariantDirection {
    pub fn new(v: [i64; 2]) -> Option<InvariantDirection> {
        let g = num_integer::gcd(v[0], v[1]);
        if g == 0 {
            return None;
        }
        let mut w = [v[0] / g, v[1] / g];
        if w[0] < 0 || (w[0] == 0 && w[1] < 0) {
            w = [-w[0], -w[1]];
        }
        Some(InvariantDirection { w })
    }
}

impl fmt::Display for InvariantDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.w[0], self.w[1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OneOrbifold {
    S1,
    I,
}

impl fmt::Display for OneOrbifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OneOrbifold::S1 => "S1",
            OneOrbifold::I => "I",
        })
    }
}

pub const REFLECTOR_CURVE: &str = "reflector curve";
pub const CENTRELINE_MB: &str = "centreline of Mb";
pub const INTERVAL_TWO_CONES: &str = "reflector interval joining two cone points";
pub const INTERVAL_CONE_REFLECTOR: &str = "reflector interval joining a cone point to the reflector curve";
pub const REFLECTOR_EDGE: &str = "reflector edge";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibrationStructure {
    pub direction: InvariantDirection,
    pub base: OneOrbifold,
    pub general_fibre: OneOrbifold,
    /// Exceptional fibres over the endpoints of the base.
    pub singular_fibres: Vec<&'static str>,
    /// Endpoint fibres that are edges of the reflector boundary; these
    /// look like general fibres and are not counted as singular.
    pub boundary_fibres: Vec<&'static str>,
}

/// Invariant directions partitioned into orbits of the normalizer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectionOrbits {
    /// Every primitive vector is invariant (holonomy in `{±I}`); `orbits`
    /// then holds the single representative `(1,0)`.
    pub all_primitive: bool,
    pub orbits: Vec<Vec<InvariantDirection>>,
}

impl DirectionOrbits {
    pub fn directions(&self) -> Vec<InvariantDirection> {
        self.orbits.iter().flatten().copied().collect()
    }
}

/// Sign `σ` with `M w = σ w`, if any.
fn eigen_sign(m: &Mat2, w: [i64; 2]) -> Option<i64> {
    let mw = m.apply_int(w);
    if mw == w {
        Some(1)
    } else if mw == [-w[0], -w[1]] {
        Some(-1)
    } else {
        None
    }
}

fn rebased(g: &CrystalGroup) -> CrystalGroup {
    if g.is_standard_lattice() {
        g.clone()
    } else {
        g.rebase().0
    }
}

/// Finite set of primitive `w` with `M w = ±w` for every holonomy element,
/// or `None` if all primitive vectors qualify.
fn direction_candidates(g: &CrystalGroup) -> Option<Vec<InvariantDirection>> {
    let els = g.holonomy().elements();
    if els.iter().all(|m| *m == Mat2::IDENTITY || *m == Mat2::NEG_IDENTITY) {
        return None;
    }
    // eigenvectors of a non-scalar element, then filter
    let m = els
        .iter()
        .find(|m| **m != Mat2::IDENTITY && **m != Mat2::NEG_IDENTITY)
        .unwrap();
    let mut cands = Vec::new();
    for s in [1i64, -1] {
        // (M - sI) w = 0
        let a = m.0[0][0] - s;
        let b = m.0[0][1];
        let c = m.0[1][0];
        let d = m.0[1][1] - s;
        for v in [[b, -a], [d, -c]] {
            if let Some(dir) = InvariantDirection::new(v) {
                if m.apply_int(dir.w) == [s * dir.w[0], s * dir.w[1]] {
                    cands.push(dir);
                }
            }
        }
    }
    cands.sort();
    cands.dedup();
    cands.retain(|d| els.iter().all(|m| eigen_sign(m, d.w).is_some()));
    Some(cands)
}

/// Unimodular `U` (entries bounded by `bound`) normalizing the holonomy and
/// fixing the extension class.
pub fn stabilized_normalizer(g: &CrystalGroup, bound: i64) -> Vec<Mat2> {
    let g = rebased(g);
    let h = g.holonomy();
    let (_, coords) = class_of_group(&g);
    unimodular_matrices(bound)
        .filter(|u| h.elements().iter().all(|m| h.contains(&u.conjugate(m))))
        .filter(|u| {
            let conj = g.conjugate(&AffineElement::linear(*u));
            class_of_group(&conj).1 == coords
        })
        .collect()
}

pub fn invariant_directions_of(g: &CrystalGroup, bound: i64) -> DirectionOrbits {
    let g = rebased(g);
    let Some(dirs) = direction_candidates(&g) else {
        return DirectionOrbits {
            all_primitive: true,
            orbits: vec![vec![InvariantDirection { w: [1, 0] }]],
        };
    };
    let normalizer = stabilized_normalizer(&g, bound);
    let mut orbits: Vec<Vec<InvariantDirection>> = Vec::new();
    for d in dirs {
        if orbits.iter().any(|o| o.contains(&d)) {
            continue;
        }
        let mut orbit: Vec<InvariantDirection> = normalizer
            .iter()
            .filter_map(|u| InvariantDirection::new(u.apply_int(d.w)))
            .collect();
        orbit.push(d);
        orbit.sort();
        orbit.dedup();
        orbits.push(orbit);
    }
    DirectionOrbits {
        all_primitive: false,
        orbits,
    }
}

pub fn invariant_directions(id: WallpaperClass) -> DirectionOrbits {
    invariant_directions_of(&standard_group(id), 2)
}

/// An isometry `s -> eps s + shift` of a line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineMap {
    pub eps: i64,
    pub shift: Rat,
}

fn det2(a: &Vec2, b: &Vec2) -> Rat {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn ivec(v: [i64; 2]) -> Vec2 {
    vec_from_ints(v[0], v[1])
}

/// Integer `w'` with `det[w, w'] = 1`.
fn complement(w: [i64; 2]) -> [i64; 2] {
    let e = num_integer::Integer::extended_gcd(&w[0], &w[1]);
    // e.x w0 + e.y w1 = 1 (w primitive), and det[w, (-y, x)] = w0 x + w1 y
    let s = e.gcd;
    [-e.y * s, e.x * s]
}

/// Action on the quotient line `R^2 / R w` (coordinate `det[w, p]`) of one
/// lift of each holonomy element, plus the unit translation from the lattice.
pub fn quotient_action(g: &CrystalGroup, w: [i64; 2]) -> Vec<LineMap> {
    let g = rebased(g);
    let wv = ivec(w);
    let mut maps = vec![LineMap {
        eps: 1,
        shift: rat(1, 1),
    }];
    for (m, t) in g.vector_system() {
        let sigma = eigen_sign(m, w).expect("direction is invariant");
        maps.push(LineMap {
            eps: m.det() * sigma,
            shift: det2(&wv, t),
        });
    }
    maps
}

fn frac(x: &Rat) -> Rat {
    x - x.floor()
}

/// Generator of the translation subgroup of a discrete group of line
/// isometries containing `s -> s + 1`, and the reflection centres.
fn line_group(maps: &[LineMap]) -> (Rat, Vec<Rat>) {
    // translations: 1 and the shifts of eps = 1 maps (all rational)
    let mut tau = rat(1, 1);
    for m in maps.iter().filter(|m| m.eps == 1) {
        let f = frac(&m.shift);
        if !f.is_zero() {
            tau = rat_gcd(&tau, &f);
        }
    }
    let centres = maps
        .iter()
        .filter(|m| m.eps == -1)
        .map(|m| &m.shift / rat(2, 1))
        .collect();
    (tau, centres)
}

fn rat_gcd(a: &Rat, b: &Rat) -> Rat {
    let den = num_integer::Integer::lcm(a.denom(), b.denom());
    let an = (a * Rat::from_integer(den.clone())).to_integer();
    let bn = (b * Rat::from_integer(den.clone())).to_integer();
    Rat::new(num_integer::Integer::gcd(&an, &bn), den)
}

/// Action on the line `ℓ = {p : det[w, p] = c}` (parametrized by `p0 + u w`)
/// of every element of the group mapping `ℓ` to itself, modulo `u -> u + 1`;
/// with `kernel_only`, only elements fixing the quotient line pointwise.
fn line_stabilizer(g: &CrystalGroup, w: [i64; 2], c: &Rat, kernel_only: bool) -> Vec<LineMap> {
    let wv = ivec(w);
    let wp = ivec(complement(w));
    let p0: Vec2 = [&wp[0] * c, &wp[1] * c];
    let mut maps = vec![LineMap {
        eps: 1,
        shift: rat(1, 1),
    }];
    for (m, t) in g.vector_system() {
        let sigma = eigen_sign(m, w).unwrap();
        let eps = m.det() * sigma;
        if kernel_only && eps != 1 {
            continue;
        }
        // need eps c + det[w, t] + n = c for an integer n
        let n = c - Rat::from_integer((eps).into()) * c - det2(&wv, t);
        if !n.is_integer() {
            continue;
        }
        let shift_lat: Vec2 = [&wp[0] * &n, &wp[1] * &n];
        let t2 = vec_add(t, &shift_lat);
        let image = vec_add(&m.apply(&p0), &t2);
        let v = vec_sub(&image, &p0);
        debug_assert!(det2(&wv, &v).is_zero());
        maps.push(LineMap {
            eps: sigma,
            shift: det2(&v, &wp),
        });
    }
    maps
}

/// Whether two groups of line isometries (both containing `u -> u + 1`)
/// coincide.
fn same_line_group(a: &[LineMap], b: &[LineMap]) -> bool {
    let (ta, ca) = line_group(a);
    let (tb, cb) = line_group(b);
    if ta != tb {
        return false;
    }
    let half = &ta / rat(2, 1);
    let norm = |cs: &[Rat]| {
        let mut v: Vec<Rat> = cs
            .iter()
            .map(|c| {
                let q = c / &half;
                (&q - q.floor()) * &half
            })
            .collect();
        v.sort();
        v.dedup();
        v
    };
    norm(&ca) == norm(&cb)
}

pub fn fibration_structure_of(g: &CrystalGroup, w: InvariantDirection) -> FibrationStructure {
    let g = rebased(g);
    let base_maps = quotient_action(&g, w.w);
    let (tau, centres) = line_group(&base_maps);
    let generic = &tau / rat(7, 1) + rat(1, 1000);
    let kernel = line_stabilizer(&g, w.w, &generic, true);
    let general_fibre = if kernel.iter().any(|m| m.eps == -1) {
        OneOrbifold::I
    } else {
        OneOrbifold::S1
    };
    let mut singular_fibres = Vec::new();
    let mut boundary_fibres = Vec::new();
    let base = if centres.is_empty() {
        OneOrbifold::S1
    } else {
        let c0 = frac(&centres[0]);
        for c in [c0.clone(), &c0 + &tau / rat(2, 1)] {
            let k = line_stabilizer(&g, w.w, &c, true);
            let s = line_stabilizer(&g, w.w, &c, false);
            let descriptor = if same_line_group(&k, &s) {
                match general_fibre {
                    OneOrbifold::S1 => Some(REFLECTOR_CURVE),
                    OneOrbifold::I => None,
                }
            } else {
                let has_reflection = s.iter().any(|m| m.eps == -1);
                Some(match (general_fibre, has_reflection) {
                    (OneOrbifold::S1, true) => INTERVAL_TWO_CONES,
                    (OneOrbifold::S1, false) => CENTRELINE_MB,
                    (OneOrbifold::I, _) => INTERVAL_CONE_REFLECTOR,
                })
            };
            match descriptor {
                Some(d) => singular_fibres.push(d),
                None => boundary_fibres.push(REFLECTOR_EDGE),
            }
        }
        OneOrbifold::I
    };
    singular_fibres.sort();
    FibrationStructure {
        direction: w,
        base,
        general_fibre,
        singular_fibres,
        boundary_fibres,
    }
}

/// One structure per orbit of invariant directions.
pub fn fibration_structures_of(g: &CrystalGroup) -> Vec<FibrationStructure> {
    invariant_directions_of(g, 2)
        .orbits
        .iter()
        .map(|o| fibration_structure_of(g, o[0]))
        .collect()
}

pub fn fibration_structures(id: WallpaperClass) -> Vec<FibrationStructure> {
    fibration_structures_of(&standard_group(id))
}

/// Whether the group maps onto `Z`.
pub fn fibres_over_circle(id: WallpaperClass) -> bool {
    entry(id).abelianization.free_rank >= 1
}

/// Checks the quotient by the fibre subgroup acting on the quotient line:
/// for base `S1` every element acts by a translation (the quotient is
/// infinite cyclic); for base `I` it is generated by two reflections
/// `s -> -s + a` and `s -> -s + a + tau` whose product, translation by
/// `tau`, has infinite order.
pub fn quotient_type_holds(g: &CrystalGroup, s: &FibrationStructure) -> bool {
    let maps = quotient_action(g, s.direction.w);
    let (tau, centres) = line_group(&maps);
    let translations_ok = maps
        .iter()
        .filter(|m| m.eps == 1)
        .all(|m| (&m.shift / &tau).is_integer());
    match s.base {
        OneOrbifold::S1 => centres.is_empty() && translations_ok,
        OneOrbifold::I => {
            let Some(c0) = centres.first() else { return false };
            let half = &tau / rat(2, 1);
            translations_ok
                && !tau.is_zero()
                && centres.iter().all(|c| ((c - c0) / &half).is_integer())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use WallpaperClass::*;

    fn counts(id: WallpaperClass) -> Vec<usize> {
        invariant_directions(id).orbits.iter().map(Vec::len).collect()
    }

    #[test]
    fn direction_orbits() {
        assert!(invariant_directions(P2).all_primitive);
        assert_eq!(invariant_directions(P2).orbits.len(), 1);
        let pmg = invariant_directions(Pmg);
        assert_eq!(pmg.orbits.len(), 2);
        assert_eq!(pmg.directions(), vec![InvariantDirection { w: [0, 1] }, InvariantDirection { w: [1, 0] }]);
        let cmm = invariant_directions(Cmm);
        assert_eq!(cmm.orbits, vec![vec![InvariantDirection { w: [1, -1] }, InvariantDirection { w: [1, 1] }]]);
        assert_eq!(counts(Pmm), vec![2]);
        assert_eq!(counts(Pgg), vec![2]);
        for id in [P4, P4m, P4g, P3, P3m1, P31m, P6, P6m] {
            assert!(invariant_directions(id).orbits.is_empty(), "{id}");
            assert!(fibration_structures(id).is_empty(), "{id}");
        }
    }

    #[test]
    fn normalizer_bound_is_stable() {
        for id in WallpaperClass::ALL {
            let g = standard_group(id);
            assert_eq!(invariant_directions_of(&g, 2), invariant_directions_of(&g, 3), "{id}");
        }
    }

    #[test]
    fn structure_examples() {
        let p1 = fibration_structures(P1);
        assert_eq!(p1.len(), 1);
        assert_eq!((p1[0].base, p1[0].general_fibre), (OneOrbifold::S1, OneOrbifold::S1));
        assert!(p1[0].singular_fibres.is_empty());

        let pgg = fibration_structures(Pgg);
        assert_eq!(pgg.len(), 1);
        assert_eq!((pgg[0].base, pgg[0].general_fibre), (OneOrbifold::I, OneOrbifold::S1));
        assert_eq!(pgg[0].singular_fibres, vec![CENTRELINE_MB, INTERVAL_TWO_CONES]);

        let pmg = fibration_structures(Pmg);
        let mut kinds: Vec<_> = pmg.iter().map(|s| (s.general_fibre, s.singular_fibres.clone())).collect();
        kinds.sort_by_key(|k| k.0 == OneOrbifold::I);
        assert_eq!(kinds[0], (OneOrbifold::S1, vec![REFLECTOR_CURVE, INTERVAL_TWO_CONES]));
        assert_eq!(kinds[1], (OneOrbifold::I, vec![INTERVAL_CONE_REFLECTOR, INTERVAL_CONE_REFLECTOR]));

        let p2 = fibration_structures(P2);
        assert_eq!(p2[0].singular_fibres, vec![INTERVAL_TWO_CONES, INTERVAL_TWO_CONES]);
        let cmm = fibration_structures(Cmm);
        assert_eq!((cmm[0].base, cmm[0].general_fibre), (OneOrbifold::I, OneOrbifold::I));
        assert_eq!(cmm[0].singular_fibres, vec![INTERVAL_CONE_REFLECTOR]);
        let pmm = fibration_structures(Pmm);
        assert_eq!((pmm[0].base, pmm[0].general_fibre), (OneOrbifold::I, OneOrbifold::I));
        assert!(pmm[0].singular_fibres.is_empty());
        assert_eq!(pmm[0].boundary_fibres.len(), 2);
    }

    #[test]
    fn circle_fibrations_match_rank() {
        for id in WallpaperClass::ALL {
            let has_s1_base = fibration_structures(id).iter().any(|s| s.base == OneOrbifold::S1);
            assert_eq!(has_s1_base, fibres_over_circle(id), "{id}");
            assert_eq!(fibres_over_circle(id), matches!(id, P1 | Pm | Pg | Cm), "{id}");
            let g = standard_group(id);
            for s in fibration_structures(id) {
                assert!(quotient_type_holds(&g, &s), "{id}");
            }
        }
    }

    #[test]
    fn complement_has_unit_determinant() {
        for w in [[1, 0], [0, 1], [1, 1], [1, -1], [2, 3], [-3, 5]] {
            let c = complement(w);
            assert_eq!(w[0] * c[1] - w[1] * c[0], 1, "{w:?}");
        }
    }
}
