//! Identification of a planar crystallographic group as one of the 17
//! classes, via the pair (holonomy class, abelianization).

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::affine::{group_from_generators, AffineElement, CrystalGroup};
use crate::catalog::{entries, entry, WallpaperClass};
use crate::cohomology::class_of_group;
use crate::error::{Error, Result};
use crate::holonomy::{classify_point_group, conjugator_to_standard, PointGroupClass};
use crate::linalg::{int, IntMatrix};
use crate::mat2::{vec_is_integral, Mat2};
use crate::presentation::{
    abelianization, evaluate_word, parse_word, Abelianization, Assignment, FinitePresentation, Word,
};

#[derive(Clone, Debug, Serialize)]
pub struct RecognitionReport {
    pub class: WallpaperClass,
    pub rebased_group: CrystalGroup,
    pub holonomy_class: PointGroupClass,
    pub abelianization: Abelianization,
    pub extension_coordinates: Vec<u64>,
}

/// A presentation together with the images of its generators.
#[derive(Clone, Debug)]
pub struct DerivedPresentation {
    pub presentation: FinitePresentation,
    pub assignment: Assignment,
}

fn lift_name(m: &Mat2) -> &'static str {
    if m.det() == 1 {
        match m.order() {
            Some(2) => "j",
            Some(3) => "c",
            Some(4) => "a",
            _ => "b",
        }
    } else {
        // mirror-type reflections have a torsion-free coinvariant quotient
        let d = m.sub_identity();
        let g = crate::linalg::gcd_all(d.to_int_matrix().to_rows().iter().flatten());
        if g == int(1) {
            "r"
        } else {
            "d"
        }
    }
}

/// `x^a y^b` as a word over generators 0 (x) and 1 (y).
fn lattice_word(v: [i64; 2]) -> Word {
    Word::generator(0).pow(v[0]).concat(&Word::generator(1).pow(v[1]))
}

fn integral(v: &crate::mat2::Vec2) -> [i64; 2] {
    assert!(vec_is_integral(v));
    [
        num_traits::ToPrimitive::to_i64(&v[0].to_integer()).unwrap(),
        num_traits::ToPrimitive::to_i64(&v[1].to_integer()).unwrap(),
    ]
}

/// Extension-style presentation of a group whose lattice is `Z^2`:
/// generators `x, y` and one lift per generator of the holonomy; relators
/// `[x,y]`, the action relators, and one relator `w_M g = λ w_{Mg}` for each
/// holonomy element `M` and generator `g`, where `w_M` is a fixed word
/// lifting `M`.
pub fn derive_presentation(g: &CrystalGroup) -> DerivedPresentation {
    let (g, _) = g.rebase();
    let hgens = g.holonomy().minimal_generators();
    let mut names: Vec<String> = vec!["x".into(), "y".into()];
    for m in &hgens {
        let base = lift_name(m);
        let name = if names.iter().any(|n| n == base) {
            format!("{base}{}", names.len() - 1)
        } else {
            base.to_string()
        };
        names.push(name);
    }
    let lifts: Vec<AffineElement> = hgens.iter().map(|m| g.lift(m).unwrap()).collect();
    let mut images = vec![
        AffineElement::translation(crate::mat2::vec_from_ints(1, 0)),
        AffineElement::translation(crate::mat2::vec_from_ints(0, 1)),
    ];
    images.extend(lifts.iter().cloned());

    let mut relators = vec![Word::commutator(&Word::generator(0), &Word::generator(1))];
    for (k, m) in hgens.iter().enumerate() {
        let gw = Word::generator(k + 2);
        for (i, e) in [0usize, 1].into_iter().enumerate() {
            let lhs = gw.concat(&Word::generator(e)).concat(&gw.inverse());
            let col = m.column(i);
            relators.push(lhs.concat(&lattice_word(col).inverse()).free_reduce());
        }
    }
    // spanning tree words over the holonomy
    let mut words: BTreeMap<Mat2, Word> = BTreeMap::new();
    let mut queue = VecDeque::new();
    words.insert(Mat2::IDENTITY, Word::empty());
    queue.push_back(Mat2::IDENTITY);
    while let Some(m) = queue.pop_front() {
        for (k, h) in hgens.iter().enumerate() {
            let n = m * *h;
            if !words.contains_key(&n) {
                let w = words[&m].concat(&Word::generator(k + 2));
                words.insert(n, w);
                queue.push_back(n);
            }
        }
    }
    for (m, wm) in &words {
        for (k, h) in hgens.iter().enumerate() {
            let lhs = wm.concat(&Word::generator(k + 2));
            let rhs = &words[&(*m * *h)];
            let diff = evaluate_word(&lhs, &images).compose(&evaluate_word(rhs, &images).inverse());
            let rel = lhs
                .concat(&rhs.inverse())
                .concat(&lattice_word(integral(&diff.translation)).inverse())
                .free_reduce();
            if !rel.is_empty() && !relators.contains(&rel) {
                relators.push(rel);
            }
        }
    }
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let presentation = FinitePresentation::new(&name_refs, relators);
    let assignment = names.into_iter().zip(images).collect();
    DerivedPresentation {
        presentation,
        assignment,
    }
}

/// Extension coordinates after conjugating the holonomy to its standard
/// representative.
pub fn standard_extension_coordinates(g: &CrystalGroup) -> Vec<u64> {
    let (r, _) = g.rebase();
    let (_, u) = conjugator_to_standard(r.holonomy()).expect("holonomy is conjugate to a representative");
    let s = r.conjugate(&AffineElement::linear(u));
    class_of_group(&s).1
}

pub fn identify(g: &CrystalGroup) -> Result<RecognitionReport> {
    let (rebased, _) = g.rebase();
    let holonomy_class = classify_point_group(rebased.holonomy());
    let ab = abelianization(&derive_presentation(&rebased).presentation);
    let candidates: Vec<WallpaperClass> = entries()
        .iter()
        .filter(|e| e.holonomy_class == holonomy_class && e.abelianization == ab)
        .map(|e| e.class)
        .collect();
    let class = match candidates.as_slice() {
        [c] => *c,
        _ => {
            return Err(Error::Inconsistent(format!(
                "no unique class with holonomy {} and abelianization {ab}",
                holonomy_class.label()
            )))
        }
    };
    let coords = standard_extension_coordinates(&rebased);
    if !entry(class).equivalent_coordinates.contains(&coords) {
        return Err(Error::Inconsistent(format!(
            "extension coordinates {coords:?} disagree with {class}"
        )));
    }
    Ok(RecognitionReport {
        class,
        rebased_group: rebased,
        holonomy_class,
        abelianization: ab,
        extension_coordinates: coords,
    })
}

/// Identifies the subgroup of `standard_group(id)` generated by the images
/// of `words` (over the generator names of both catalog presentations).
pub fn identify_subgroup(id: WallpaperClass, words: &[Word]) -> Result<RecognitionReport> {
    let e = entry(id);
    let named = e.named_elements();
    let imgs: Vec<AffineElement> = e.generator_names().iter().map(|n| named[n].clone()).collect();
    let gens: Vec<AffineElement> = words.iter().map(|w| evaluate_word(w, &imgs)).collect();
    identify(&group_from_generators(&gens)?)
}

/// As [`identify_subgroup`], with words given as text.
pub fn identify_subgroup_text(id: WallpaperClass, words: &[&str]) -> Result<RecognitionReport> {
    let names = entry(id).generator_names();
    let ws = words
        .iter()
        .map(|w| parse_word(w, &names))
        .collect::<Result<Vec<_>>>()?;
    identify_subgroup(id, &ws)
}

/// Index of a subgroup `h` in `g` (both crystallographic, `h <= g`):
/// lattice index times holonomy index.
pub fn subgroup_index(g: &CrystalGroup, h: &CrystalGroup) -> u64 {
    let coords: Vec<Vec<crate::linalg::Int>> = h
        .lattice_basis()
        .iter()
        .map(|v| g.lattice_coordinates(v).iter().map(|x| x.to_integer()).collect())
        .collect();
    let det = IntMatrix::from_int_rows(coords).determinant();
    let lat = num_traits::ToPrimitive::to_u64(&num_traits::Signed::abs(&det)).unwrap();
    lat * (g.holonomy().order() / h.holonomy().order()) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::standard_group;
    use crate::cohomology::{extension_from_cocycle, h2_of_point_group};
    use crate::presentation::verify_presentation_against;
    use WallpaperClass::*;

    #[test]
    fn round_trip() {
        for c in WallpaperClass::ALL {
            let r = identify(&standard_group(c)).unwrap();
            assert_eq!(r.class, c);
        }
    }

    #[test]
    fn derived_presentations_verify() {
        for c in WallpaperClass::ALL {
            let g = standard_group(c);
            let d = derive_presentation(&g);
            assert!(
                verify_presentation_against(&d.presentation, &d.assignment, &g).unwrap(),
                "{c}: {}",
                d.presentation
            );
        }
        let p1 = derive_presentation(&standard_group(P1));
        assert_eq!(p1.presentation.to_string(), "<x,y | xyx^-1y^-1>");
        let pg = derive_presentation(&standard_group(Pg));
        let d2x = pg.presentation.word("d^2x^-1").unwrap();
        assert!(pg.presentation.relators.contains(&d2x), "{}", pg.presentation);
    }

    #[test]
    fn nonsplit_glide_extension_is_pg() {
        let h = PointGroupClass::C2GlideAxis.representative();
        let h2 = h2_of_point_group(&h);
        let g = extension_from_cocycle(&h2.cocycle_for(&[1])).unwrap();
        assert_eq!(identify(&g).unwrap().class, Pg);
    }

    #[test]
    fn subgroup_examples() {
        assert_eq!(identify_subgroup_text(Pm, &["xy", "d"]).unwrap().class, Cm);
        assert_eq!(identify_subgroup_text(Cm, &["z", "[r,z]"]).unwrap().class, Pg);
        assert_eq!(identify_subgroup_text(Pmg, &["x", "y", "d"]).unwrap().class, Pm);
        assert_eq!(identify_subgroup_text(Pmg, &["x", "y", "jd"]).unwrap().class, Pg);
        assert!(matches!(
            identify_subgroup_text(Pm, &["x"]),
            Err(Error::LatticeDeficient { .. })
        ));
    }

    #[test]
    fn index_arithmetic() {
        let g = standard_group(Pm);
        let h = identify_subgroup_text(Pm, &["xy", "d"]).unwrap();
        let sub = group_from_generators(&[
            AffineElement::translation(crate::mat2::vec_from_ints(1, 1)),
            AffineElement::linear(crate::holonomy::AR),
        ])
        .unwrap();
        assert_eq!(subgroup_index(&g, &sub), 2);
        assert_eq!(h.class, Cm);
    }
}
