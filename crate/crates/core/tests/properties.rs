use std::collections::BTreeMap;

use proptest::prelude::*;

use wallpaper_core::affine::{compose, group_from_generators, membership, AffineElement};
use wallpaper_core::catalog::{entries, entry, standard_group, WallpaperClass};
use wallpaper_core::cohomology::{class_of_group, extension_from_cocycle, h2_of_point_group, Cocycle2};
use wallpaper_core::covering::{covers, obstruction, rescaled_subgroup, CoverDecision, Obstruction};
use wallpaper_core::holonomy::{classify_point_group, PointGroupClass};
use wallpaper_core::linalg::{hermite_normal_form, rat, smith_normal_form, Int, IntMatrix};
use wallpaper_core::mat2::Mat2;
use wallpaper_core::presentation::{coset_enumeration, evaluate_word, low_index_subgroups, FinitePresentation, Word};
use wallpaper_core::recognition::{identify, subgroup_index};

fn matrix(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-5i64..=5, n), n)
}

const MOVES: [Mat2; 5] = [
    Mat2::new(1, 1, 0, 1),
    Mat2::new(1, -1, 0, 1),
    Mat2::new(1, 0, 1, 1),
    Mat2::new(1, 0, -1, 1),
    Mat2::new(0, 1, 1, 0),
];

fn unimodular() -> impl Strategy<Value = Mat2> {
    prop::collection::vec(0..MOVES.len(), 0..6).prop_map(|ks| ks.into_iter().fold(Mat2::IDENTITY, |u, k| u * MOVES[k]))
}

fn affine() -> impl Strategy<Value = AffineElement> {
    (unimodular(), -6i64..=6, 1i64..=6, -6i64..=6, 1i64..=6)
        .prop_map(|(m, a, b, c, d)| AffineElement::new(m, [rat(a, b), rat(c, d)]))
}

fn class() -> impl Strategy<Value = WallpaperClass> {
    (0..17usize).prop_map(|i| WallpaperClass::ALL[i])
}

/// A random element of a catalog group as a word in its generators.
fn member(id: WallpaperClass, word: &[(usize, bool)]) -> AffineElement {
    let gens = standard_group(id).standard_generators();
    word.iter().fold(AffineElement::identity(), |acc, (k, inv)| {
        let g = &gens[k % gens.len()];
        compose(&acc, &if *inv { g.inverse() } else { g.clone() })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_decomposition_invariants(m in prop_oneof![matrix(2), matrix(3)]) {
        let a = IntMatrix::from_rows(&m);
        let s = smith_normal_form(&a);
        prop_assert_eq!(&(&(&s.u * &a) * &s.v), &s.s);
        let one = Int::from(1);
        prop_assert_eq!(num_traits::Signed::abs(&s.u.determinant()), one.clone());
        prop_assert_eq!(num_traits::Signed::abs(&s.v.determinant()), one);
        let f = &s.invariant_factors;
        for i in 1..f.len() {
            let zero = Int::from(0);
            prop_assert!(f[i] == zero || (f[i - 1] != zero && &f[i] % &f[i - 1] == zero));
        }
        prop_assert_eq!(smith_normal_form(&a).s, s.s);
    }

    #[test]
    fn hermite_is_a_unimodular_row_reduction(m in prop_oneof![matrix(2), matrix(3)]) {
        let a = IntMatrix::from_rows(&m);
        let (h, u) = hermite_normal_form(&a);
        prop_assert_eq!(&(&u * &a), &h);
        prop_assert_eq!(num_traits::Signed::abs(&u.determinant()), Int::from(1));
    }

    #[test]
    fn compose_is_associative(a in affine(), b in affine(), c in affine()) {
        prop_assert_eq!(compose(&compose(&a, &b), &c), compose(&a, &compose(&b, &c)));
        prop_assert!(compose(&a, &a.inverse()).is_identity());
        prop_assert!(compose(&a.inverse(), &a).is_identity());
    }

    #[test]
    fn membership_is_closed(
        id in class(),
        w1 in prop::collection::vec((0usize..8, any::<bool>()), 0..8),
        w2 in prop::collection::vec((0usize..8, any::<bool>()), 0..8),
    ) {
        let g = standard_group(id);
        let (a, b) = (member(id, &w1), member(id, &w2));
        prop_assert!(membership(&a, &g) && membership(&b, &g));
        prop_assert!(membership(&compose(&a, &b), &g));
        prop_assert!(membership(&a.inverse(), &g));
    }

    #[test]
    fn classification_is_conjugation_invariant(k in 0..13usize, u in unimodular()) {
        let pc = PointGroupClass::ALL[k];
        prop_assert_eq!(classify_point_group(&pc.representative().conjugate_by(&u)), pc);
    }

    #[test]
    fn identify_is_conjugation_invariant(id in class(), u in affine()) {
        let g = standard_group(id).conjugate(&u);
        prop_assert_eq!(identify(&g).unwrap().class, id);
    }

    #[test]
    fn cohomologous_cocycles_give_the_same_group(
        k in 0..13usize,
        f in prop::collection::vec((-3i64..=3, -3i64..=3), 12),
    ) {
        let h = PointGroupClass::ALL[k].representative();
        let h2 = h2_of_point_group(&h);
        for coords in h2.elements() {
            let c = h2.cocycle_for(&coords);
            let f: BTreeMap<Mat2, [i64; 2]> = h.elements()[1..]
                .iter()
                .zip(&f)
                .map(|(m, v)| (*m, [v.0, v.1]))
                .collect();
            let shifted = c.add(&Cocycle2::coboundary(&h, &f));
            let a = identify(&extension_from_cocycle(&c).unwrap()).unwrap().class;
            let b = identify(&extension_from_cocycle(&shifted).unwrap()).unwrap().class;
            prop_assert_eq!(a, b);
            prop_assert_eq!(h2.coordinates(&shifted), coords);
        }
    }
}

#[test]
fn rebuilding_from_lifts_is_idempotent() {
    for id in WallpaperClass::ALL {
        let g = standard_group(id);
        assert!(g.satisfies_cocycle_condition(), "{id}");
        let mut gens: Vec<AffineElement> =
            g.lattice_basis().iter().map(|v| AffineElement::translation(v.clone())).collect();
        for m in g.holonomy().generators() {
            gens.push(g.lift(m).unwrap());
        }
        assert_eq!(group_from_generators(&gens).unwrap(), g, "{id}");
    }
}

#[test]
fn extension_round_trip_on_basis_cocycles() {
    for pc in PointGroupClass::ALL {
        let h2 = h2_of_point_group(&pc.representative());
        for coords in h2.elements() {
            let g = extension_from_cocycle(&h2.cocycle_for(&coords)).unwrap();
            assert_eq!(class_of_group(&g).1, coords, "{}", pc.label());
        }
    }
}

#[test]
fn separating_invariants_are_distinct() {
    let mut seen = BTreeMap::new();
    for e in entries() {
        assert!(seen.insert((e.holonomy_class, e.abelianization.clone()), e.class).is_none(), "{}", e.class);
    }
    assert_eq!(seen.len(), 17);
}

#[test]
fn representatives_classify_to_themselves() {
    for pc in PointGroupClass::ALL {
        assert_eq!(classify_point_group(&pc.representative()), pc);
        for s in pc.representative().subgroups() {
            assert_eq!(classify_point_group(&s).order(), s.order());
        }
    }
}

#[test]
fn p1_low_index_counts_are_divisor_sums() {
    let p = FinitePresentation::parse("<x,y | [x,y]>").unwrap();
    for n in 1..=8usize {
        let total: usize = (1..=n).map(|m| (1..=m).filter(|d| m % d == 0).sum::<usize>()).sum();
        assert_eq!(low_index_subgroups(&p, n).len(), total, "n = {n}");
    }
}

/// `[G:H]` by coset enumeration equals `[G:K]` by coset enumeration times
/// `[K:H]` from lattice and holonomy arithmetic.
#[test]
fn index_towers_multiply() {
    let cases: [(WallpaperClass, &[&str], &[&str]); 5] = [
        (WallpaperClass::P1, &["x^2", "y"], &["x^4", "y^2"]),
        (WallpaperClass::P2, &["x", "y"], &["x^2", "y"]),
        (WallpaperClass::Pm, &["xy", "d"], &["x^2y^2", "d", "x^2"]),
        (WallpaperClass::P4, &["x", "y", "a^2"], &["x", "y"]),
        (WallpaperClass::Pgg, &["x", "y"], &["x^3", "y"]),
    ];
    for (id, k, h) in cases {
        let e = entry(id);
        let p = &e.presentation_extension.presentation;
        let imgs: Vec<AffineElement> = p.generators.iter().map(|n| e.named_elements()[n].clone()).collect();
        let words = |ws: &[&str]| -> Vec<Word> { ws.iter().map(|w| p.word(w).unwrap()).collect() };
        let group = |ws: &[Word]| {
            let gens: Vec<AffineElement> = ws.iter().map(|w| evaluate_word(w, &imgs)).collect();
            group_from_generators(&gens).unwrap()
        };
        let (kw, hw) = (words(k), words(h));
        let gk = coset_enumeration(p, &kw, 100_000).unwrap().index();
        let gh = coset_enumeration(p, &hw, 100_000).unwrap().index();
        let kh = subgroup_index(&group(&kw), &group(&hw)) as usize;
        assert_eq!(gh, gk * kh, "{id}: {k:?} > {h:?}");
    }
}

#[test]
fn obstructions_are_sound() {
    for c in WallpaperClass::ALL {
        for b in WallpaperClass::ALL {
            let Some(cert) = obstruction(c, b) else { continue };
            let sc = standard_group(c).finite_subgroup_spectrum();
            let sb = standard_group(b).finite_subgroup_spectrum();
            match cert.obstruction {
                Obstruction::Reflection => assert!(sc.has_reflection && !sb.has_reflection),
                Obstruction::Cone(n) => {
                    assert!(sc.cone_orders.contains(&n));
                    assert!(!sb.rotation_orders().iter().any(|k| k % n == 0), "{c} {b}");
                }
                Obstruction::Corner(n) => {
                    assert!(sc.corner_orders.contains(&n));
                    assert!(!sb.corner_orders.iter().any(|k| k % n == 0), "{c} {b}");
                }
                Obstruction::Holonomy => {
                    // rational conjugacy of finite subgroups is detected by traces
                    let profile = standard_group(c).holonomy().trace_det_profile();
                    let subs = standard_group(b).holonomy().subgroups();
                    assert!(!subs.iter().any(|s| s.trace_det_profile() == profile), "{c} {b}");
                }
            }
        }
    }
}

#[test]
fn covers_are_reflexive() {
    for id in WallpaperClass::ALL {
        assert!(matches!(covers(id, id, 1), CoverDecision::Yes(_)), "{id}");
    }
}

/// Doubling the lattice and keeping the original lifts gives a subgroup of
/// the same class at index 4, except where a lift squares to a translation
/// outside `2Λ`.
#[test]
fn doubled_lattice_keeps_the_class() {
    let mut odd = Vec::new();
    for id in WallpaperClass::ALL {
        let h = rescaled_subgroup(id, [[2, 0], [0, 2]]);
        if subgroup_index(&standard_group(id), &h) == 4 {
            assert_eq!(identify(&h).unwrap().class, id, "{id}");
        } else {
            odd.push(id);
        }
    }
    use WallpaperClass::*;
    assert_eq!(odd, vec![Pg, Pmg, Pgg, P4g]);
}
