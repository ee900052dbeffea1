//! Coverings among the 17 orbifolds: finite-index subgroups found by
//! low-index enumeration, non-covering certificates from monotone
//! invariants, equitranslational covers and self-coverings.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::affine::{group_from_generators, AffineElement, CrystalGroup, LocalGroupSpectrum};
use crate::catalog::{entry, standard_group, WallpaperClass};
use crate::error::Result;
use crate::holonomy::{q_embeddable, PointGroup};
use crate::mat2::vec_from_ints;
use crate::presentation::{
    coset_enumeration, evaluate_word, images, low_index_subgroups, reidemeister_schreier, Word,
    DEFAULT_MAX_COSETS,
};
use crate::recognition::{identify, subgroup_index, RecognitionReport};

pub const DEFAULT_MAX_INDEX: usize = 16;

/// A conjugacy class of finite-index subgroups of a catalog group.
#[derive(Clone, Debug, Serialize)]
pub struct ClassifiedSubgroup {
    pub index: usize,
    pub class: WallpaperClass,
    /// Generators as words in the orbifold presentation of the base.
    pub words: Vec<String>,
    #[serde(skip)]
    pub group: CrystalGroup,
}

/// Images of the orbifold presentation generators of `id`.
fn orbifold_images(id: WallpaperClass) -> Vec<AffineElement> {
    let e = entry(id);
    images(&e.presentation_orbifold.presentation, &e.presentation_orbifold.assignment)
        .expect("catalog assignments are complete")
}

fn classify_all(id: WallpaperClass, max_index: usize) -> Vec<ClassifiedSubgroup> {
    let p = &entry(id).presentation_orbifold.presentation;
    let imgs = orbifold_images(id);
    let mut out: Vec<ClassifiedSubgroup> = low_index_subgroups(p, max_index)
        .iter()
        .map(|t| {
            let words = reidemeister_schreier(p, t);
            let gens: Vec<AffineElement> = if words.is_empty() {
                Vec::new()
            } else {
                words.iter().map(|w| evaluate_word(w, &imgs)).collect()
            };
            let group = group_from_generators(&gens)
                .expect("finite-index subgroups of crystallographic groups are crystallographic");
            let class = identify(&group).expect("subgroup is one of the 17").class;
            ClassifiedSubgroup {
                index: t.index(),
                class,
                words: words.iter().map(|w| w.display(&p.generators)).collect(),
                group,
            }
        })
        .collect();
    out.sort_by(|a, b| (a.index, a.class).cmp(&(b.index, b.class)));
    out
}

type Cache = Mutex<HashMap<(WallpaperClass, usize), Arc<Vec<ClassifiedSubgroup>>>>;

/// Conjugacy classes of subgroups of index at most `max_index`, each
/// identified; sorted by (index, class).
pub fn classified_subgroups(id: WallpaperClass, max_index: usize) -> Arc<Vec<ClassifiedSubgroup>> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&(id, max_index)) {
        return v.clone();
    }
    let v = Arc::new(classify_all(id, max_index));
    cache.lock().unwrap().insert((id, max_index), v.clone());
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Obstruction {
    /// The cover's holonomy is not conjugate in GL(2, Q) to a subgroup of
    /// the base's.
    Holonomy,
    Reflection,
    Cone(u32),
    Corner(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub obstruction: Obstruction,
    pub detail: String,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.detail)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverWitness {
    pub index: usize,
    pub words: Vec<String>,
    pub report: RecognitionReport,
}

#[derive(Clone, Debug, Serialize)]
pub enum CoverDecision {
    Yes(CoverWitness),
    No(Certificate),
    Unknown { max_index: usize },
}

impl CoverDecision {
    pub fn is_yes(&self) -> bool {
        matches!(self, CoverDecision::Yes(_))
    }
    pub fn is_no(&self) -> bool {
        matches!(self, CoverDecision::No(_))
    }
}

fn spectrum(id: WallpaperClass) -> LocalGroupSpectrum {
    standard_group(id).finite_subgroup_spectrum()
}

/// A monotone obstruction to `cover` being a finite-index subgroup of
/// `base`: point stabilizers of a subgroup are subgroups of point
/// stabilizers, and the holonomy of a subgroup embeds in the holonomy.
pub fn obstruction(cover: WallpaperClass, base: WallpaperClass) -> Option<Certificate> {
    let hc = standard_group(cover).holonomy().clone();
    let hb = standard_group(base).holonomy().clone();
    if !q_embeddable(&hc, &hb) {
        return Some(Certificate {
            obstruction: Obstruction::Holonomy,
            detail: format!(
                "holonomy {} of cover not conjugate in GL(2,Q) to a subgroup of {}",
                entry(cover).holonomy_class.label(),
                entry(base).holonomy_class.label()
            ),
        });
    }
    let sc = spectrum(cover);
    let sb = spectrum(base);
    if sc.has_reflection && !sb.has_reflection {
        return Some(Certificate {
            obstruction: Obstruction::Reflection,
            detail: "reflection in cover, none in base".into(),
        });
    }
    for &m in &sc.corner_orders {
        if !sb.corner_orders.iter().any(|&k| k % m == 0) {
            return Some(Certificate {
                obstruction: Obstruction::Corner(m),
                detail: format!(
                    "corner D{m} (order-{} dihedral stabilizer) in cover, none in base",
                    2 * m
                ),
            });
        }
    }
    for &n in &sc.cone_orders {
        if !sb.rotation_orders().iter().any(|&k| k % n == 0) {
            return Some(Certificate {
                obstruction: Obstruction::Cone(n),
                detail: format!("cone point of order {n} in cover, no rotation of order divisible by {n} in base"),
            });
        }
    }
    None
}

/// Re-verifies a subgroup independently: coset enumeration index equals
/// lattice-times-holonomy index, and recognition reproduces the class.
pub fn verify_witness(base: WallpaperClass, s: &ClassifiedSubgroup) -> bool {
    let p = &entry(base).presentation_orbifold.presentation;
    let words: Vec<Word> = match s.words.iter().map(|w| p.word(w)).collect::<Result<Vec<_>>>() {
        Ok(w) => w,
        Err(_) => return false,
    };
    let Ok(table) = coset_enumeration(p, &words, DEFAULT_MAX_COSETS) else {
        return false;
    };
    let imgs = orbifold_images(base);
    let gens: Vec<AffineElement> = words.iter().map(|w| evaluate_word(w, &imgs)).collect();
    let Ok(h) = group_from_generators(&gens) else {
        return false;
    };
    let arithmetic = subgroup_index(&standard_group(base), &h) as usize;
    table.index() == s.index
        && arithmetic == s.index
        && identify(&h).map(|r| r.class == s.class).unwrap_or(false)
}

pub fn covers(cover: WallpaperClass, base: WallpaperClass, max_index: usize) -> CoverDecision {
    if let Some(c) = obstruction(cover, base) {
        return CoverDecision::No(c);
    }
    let subs = classified_subgroups(base, max_index);
    match subs.iter().find(|s| s.class == cover) {
        Some(s) => CoverDecision::Yes(CoverWitness {
            index: s.index,
            words: s.words.clone(),
            report: identify(&s.group).expect("identified before"),
        }),
        None => CoverDecision::Unknown { max_index },
    }
}

/// Classes of the preimages of the subgroups of the base holonomy; the
/// cover has the same lattice and index `|H| / |K|`.
#[derive(Clone, Debug, Serialize)]
pub struct EquitranslationalCover {
    pub holonomy_subgroup: PointGroup,
    pub class: WallpaperClass,
    pub index: usize,
}

pub fn preimage_of(g: &CrystalGroup, k: &PointGroup) -> CrystalGroup {
    let mut gens: Vec<AffineElement> = g
        .lattice_basis()
        .iter()
        .map(|v| AffineElement::translation(v.clone()))
        .collect();
    for m in k.elements() {
        gens.push(g.lift(m).unwrap());
    }
    group_from_generators(&gens).expect("preimage contains the lattice")
}

pub fn equitranslational_covers(base: WallpaperClass) -> Vec<EquitranslationalCover> {
    let g = standard_group(base);
    let mut subs = g.holonomy().subgroups();
    subs.sort_by_key(|s| s.order());
    subs.into_iter()
        .map(|k| {
            let h = preimage_of(&g, &k);
            EquitranslationalCover {
                class: identify(&h).expect("preimage is crystallographic").class,
                index: g.holonomy().order() / k.order(),
                holonomy_subgroup: k,
            }
        })
        .collect()
}

/// A self-covering of degree `degree`, with the lattice of the covering
/// subgroup (in coordinates of the standard lattice).
#[derive(Clone, Debug, Serialize)]
pub struct SelfCover {
    pub degree: usize,
    pub lattice: [[i64; 2]; 2],
    pub words: Vec<String>,
}

fn int_lattice(g: &CrystalGroup) -> [[i64; 2]; 2] {
    let b = g.lattice_basis();
    let f = |v: &crate::mat2::Vec2| {
        [
            num_traits::ToPrimitive::to_i64(&v[0].to_integer()).unwrap(),
            num_traits::ToPrimitive::to_i64(&v[1].to_integer()).unwrap(),
        ]
    };
    [f(&b[0]), f(&b[1])]
}

/// The subgroup generated by a sublattice and the original holonomy lifts.
pub fn rescaled_subgroup(id: WallpaperClass, lattice: [[i64; 2]; 2]) -> CrystalGroup {
    let g = standard_group(id);
    let mut gens: Vec<AffineElement> = lattice
        .iter()
        .map(|v| AffineElement::translation(vec_from_ints(v[0], v[1])))
        .collect();
    for m in g.holonomy().generators() {
        gens.push(g.lift(m).unwrap());
    }
    group_from_generators(&gens).expect("contains a full-rank lattice")
}

/// Self-coverings of degree 2 and 4, one witness each when one exists at
/// that index. Witnesses are the rescaled lattices `2Λ` and
/// `<e1+e2, e1-e2>` with the original lifts when these give a subgroup of
/// the right index; otherwise any subgroup of that index found by the
/// low-index search.
pub fn self_coverings(id: WallpaperClass) -> Vec<SelfCover> {
    let g = standard_group(id);
    let mut out = Vec::new();
    for (degree, lattice) in [(2usize, [[1, 1], [1, -1]]), (4, [[2, 0], [0, 2]])] {
        let h = rescaled_subgroup(id, lattice);
        if subgroup_index(&g, &h) as usize == degree && identify(&h).map(|r| r.class == id).unwrap_or(false) {
            out.push(SelfCover {
                degree,
                lattice: int_lattice(&h),
                words: Vec::new(),
            });
            continue;
        }
        if let Some(s) = classified_subgroups(id, degree)
            .iter()
            .find(|s| s.index == degree && s.class == id)
        {
            out.push(SelfCover {
                degree,
                lattice: int_lattice(&s.group),
                words: s.words.clone(),
            });
        }
    }
    out
}

/// Minimal proper coverings found up to `max_index`.
#[derive(Clone, Debug, Serialize)]
pub struct HasseDiagram {
    pub max_index: usize,
    /// `(cover, base, index)`: `cover` is a subgroup of `base` of this
    /// (minimal) index.
    pub edges: Vec<(WallpaperClass, WallpaperClass, usize)>,
}

/// Smallest index at which `cover` occurs in `base`, for every pair found.
pub fn covering_indices(max_index: usize) -> BTreeMap<(WallpaperClass, WallpaperClass), usize> {
    let results: Vec<(WallpaperClass, Arc<Vec<ClassifiedSubgroup>>)> = std::thread::scope(|s| {
        let handles: Vec<_> = WallpaperClass::ALL
            .into_iter()
            .map(|b| s.spawn(move || (b, classified_subgroups(b, max_index))))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut k = BTreeMap::new();
    for (base, subs) in results {
        for s in subs.iter() {
            k.entry((s.class, base)).or_insert(s.index);
        }
    }
    k
}

pub fn covering_hasse(max_index: usize) -> HasseDiagram {
    let k = covering_indices(max_index);
    let mut edges = Vec::new();
    for (&(c, b), &idx) in &k {
        if c == b {
            continue;
        }
        let factors = WallpaperClass::ALL.iter().any(|&m| {
            m != c
                && m != b
                && matches!((k.get(&(c, m)), k.get(&(m, b))), (Some(i), Some(j)) if i * j == idx)
        });
        if !factors {
            edges.push((c, b, idx));
        }
    }
    HasseDiagram { max_index, edges }
}

impl HasseDiagram {
    pub fn to_dot(&self) -> String {
        let mut s = format!("// minimal coverings found up to index {}\ndigraph coverings {{\n", self.max_index);
        for c in WallpaperClass::ALL {
            s.push_str(&format!("  \"{}\" [label=\"{} {}\"];\n", c, c, c.orbifold_ascii()));
        }
        for (c, b, i) in &self.edges {
            s.push_str(&format!("  \"{c}\" -> \"{b}\" [index={i}];\n"));
        }
        s.push_str("}\n");
        s
    }

    pub fn has_edge(&self, cover: WallpaperClass, base: WallpaperClass) -> bool {
        self.edges.iter().any(|(c, b, _)| *c == cover && *b == base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use WallpaperClass::*;

    fn pairs(id: WallpaperClass, n: usize) -> Vec<(usize, WallpaperClass)> {
        classified_subgroups(id, n).iter().map(|s| (s.index, s.class)).collect()
    }

    #[test]
    fn classified_examples() {
        assert_eq!(pairs(Pgg, 2), vec![(1, Pgg), (2, P2), (2, Pg), (2, Pg)]);
        let pm = pairs(Pm, 2);
        assert!(pm.contains(&(2, Cm)) && pm.contains(&(2, Pg)));
        assert_eq!(pairs(P1, 2), vec![(1, P1), (2, P1), (2, P1), (2, P1)]);
    }

    #[test]
    fn decisions() {
        let d = covers(Pm, Cm, 2);
        assert!(matches!(d, CoverDecision::Yes(ref w) if w.index == 2));
        assert!(covers(Pgg, Pmg, 2).is_yes());
        match covers(Pm, Pgg, 16) {
            CoverDecision::No(c) => assert_eq!(c.detail, "reflection in cover, none in base"),
            other => panic!("{other:?}"),
        }
        match covers(Cmm, Pmg, 16) {
            CoverDecision::No(c) => assert_eq!(c.obstruction, Obstruction::Corner(2)),
            other => panic!("{other:?}"),
        }
        match covers(P4m, P4g, 16) {
            CoverDecision::No(c) => assert_eq!(c.obstruction, Obstruction::Corner(4)),
            other => panic!("{other:?}"),
        }
        // p4g is a subgroup of p4m on the diagonal sublattice
        let d = covers(P4g, P4m, 16);
        assert!(matches!(d, CoverDecision::Yes(ref w) if w.index == 2), "{d:?}");
        assert!(matches!(covers(Pgg, P4, 16), CoverDecision::No(_)));
    }

    #[test]
    fn reflexive() {
        for id in WallpaperClass::ALL {
            assert!(matches!(covers(id, id, 1), CoverDecision::Yes(ref w) if w.index == 1), "{id}");
        }
    }

    #[test]
    fn witnesses_reverify() {
        for base in [Pm, Pmg, Pgg, P4] {
            for s in classified_subgroups(base, 4).iter() {
                assert!(verify_witness(base, s), "{base} {:?}", s.words);
            }
        }
    }

    #[test]
    fn equitranslational_examples() {
        let et = equitranslational_covers(Pmg);
        let class_of = |gen: crate::mat2::Mat2| {
            et.iter()
                .find(|c| c.holonomy_subgroup.order() == 2 && c.holonomy_subgroup.contains(&gen))
                .unwrap()
                .class
        };
        assert_eq!(class_of(crate::holonomy::AR), Pm);
        assert_eq!(class_of(crate::holonomy::AR.neg()), Pg);
        let p4g = equitranslational_covers(P4g);
        // every lift of AR in p4g is a glide
        let axes = crate::holonomy::PointGroupClass::D2Axes.representative();
        let diagonals = crate::holonomy::PointGroupClass::D2Mixed.representative();
        assert_eq!(p4g.iter().find(|c| c.holonomy_subgroup == axes).unwrap().class, Pgg);
        assert_eq!(p4g.iter().find(|c| c.holonomy_subgroup == diagonals).unwrap().class, Cmm);
        assert_eq!(equitranslational_covers(P6m)[0].class, P1);
        for base in WallpaperClass::ALL {
            let subs = pairs(base, 12);
            for c in equitranslational_covers(base) {
                assert!(subs.contains(&(c.index, c.class)), "{base}: {:?}", (c.index, c.class));
            }
        }
    }

    #[test]
    fn self_cover_examples() {
        let degrees = |id| self_coverings(id).iter().map(|s| s.degree).collect::<Vec<_>>();
        assert_eq!(degrees(P1), vec![2, 4]);
        assert!(degrees(Pm).contains(&2));
        assert_eq!(degrees(P3), vec![4]);
        // the diagonal sublattice with the original lifts gives cm, not pm
        let diag = rescaled_subgroup(Pm, [[1, 1], [1, -1]]);
        assert_eq!(identify(&diag).unwrap().class, Cm);
    }
}
