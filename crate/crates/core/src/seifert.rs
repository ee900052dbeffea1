//! Flat 2-orbifolds as bases of Seifert fibrations of 3- and 4-manifolds:
//! authored tables plus the consistency checks that can be computed from
//! the other modules.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::catalog::{entry, standard_group, WallpaperClass};
use crate::error::{Error, Result};
use crate::fibration::{fibration_structures, fibres_over_circle};
use crate::holonomy::PointGroupClass;
use WallpaperClass::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GeometryTag {
    Nil3,
    Flat3,
    E4,
    Nil3xE1,
    Nil4,
    Sol3xE1,
}

impl GeometryTag {
    pub const ALL: [GeometryTag; 6] = [
        GeometryTag::Nil3,
        GeometryTag::Flat3,
        GeometryTag::E4,
        GeometryTag::Nil3xE1,
        GeometryTag::Nil4,
        GeometryTag::Sol3xE1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeometryTag::Nil3 => "Nil3",
            GeometryTag::Flat3 => "Flat3",
            GeometryTag::E4 => "E4",
            GeometryTag::Nil3xE1 => "Nil3xE1",
            GeometryTag::Nil4 => "Nil4",
            GeometryTag::Sol3xE1 => "Sol3xE1",
        }
    }
}

impl fmt::Display for GeometryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeometryTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, ' ' | '_' | '-' | '^'))
            .collect::<String>()
            .to_ascii_lowercase();
        Ok(match key.as_str() {
            "nil3" => GeometryTag::Nil3,
            "flat3" | "e3" => GeometryTag::Flat3,
            "e4" | "flat4" => GeometryTag::E4,
            "nil3xe1" | "nil3e1" => GeometryTag::Nil3xE1,
            "nil4" => GeometryTag::Nil4,
            "sol3xe1" | "sol3e1" => GeometryTag::Sol3xE1,
            _ => return Err(Error::UnknownName(s.to_string())),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flat3Manifold {
    pub name: &'static str,
    pub orientable: bool,
    pub base_classes: BTreeSet<WallpaperClass>,
}

fn set(classes: &[WallpaperClass]) -> BTreeSet<WallpaperClass> {
    classes.iter().copied().collect()
}

/// Bases of the Seifert fibrations of the ten flat 3-manifolds.
pub fn flat3_base_table() -> Vec<Flat3Manifold> {
    let rows: [(&str, bool, &[WallpaperClass]); 10] = [
        ("G1", true, &[P1]),
        ("G2", true, &[Pg, P2]),
        ("G3", true, &[P3]),
        ("G4", true, &[P4]),
        ("G5", true, &[P6]),
        ("G6", true, &[Pgg]),
        ("B1", false, &[Pg, P1, Pm]),
        ("B2", false, &[Pg, P1, Cm]),
        ("B3", false, &[Pg, Pm, Pmg]),
        ("B4", false, &[Pg, Cm]),
    ];
    rows.iter()
        .map(|(name, orientable, bases)| Flat3Manifold {
            name,
            orientable: *orientable,
            base_classes: set(bases),
        })
        .collect()
}

pub fn seifert_bases(g: GeometryTag) -> BTreeSet<WallpaperClass> {
    match g {
        GeometryTag::Nil3 => set(&[P1, Pg, P2, Pgg, P4, P3, P6]),
        GeometryTag::Flat3 => flat3_base_table().into_iter().flat_map(|m| m.base_classes).collect(),
        GeometryTag::E4 | GeometryTag::Nil3xE1 => WallpaperClass::ALL.into_iter().collect(),
        GeometryTag::Nil4 => set(&[P1, Pm, Cm, Pgg, Pmg]),
        GeometryTag::Sol3xE1 => set(&[P1, Pg, Pm, Cm, P2, Pgg, Pmg]),
    }
}

/// Bases of Nil3 fibrations that come from an S¹-action.
pub fn s1_action_bases() -> BTreeSet<WallpaperClass> {
    seifert_bases(GeometryTag::Nil3)
        .into_iter()
        .filter(|c| entry(*c).signature.orientable)
        .collect()
}

/// Classes whose orbifold has no reflector curve, from the affine spectra.
pub fn no_reflector_classes() -> BTreeSet<WallpaperClass> {
    WallpaperClass::ALL
        .into_iter()
        .filter(|c| !standard_group(*c).finite_subgroup_spectrum().has_reflection)
        .collect()
}

/// Classes whose orbifold fibres over S¹ or 𝕀.
pub fn fibring_classes() -> BTreeSet<WallpaperClass> {
    WallpaperClass::ALL
        .into_iter()
        .filter(|c| fibres_over_circle(*c) || !fibration_structures(*c).is_empty())
        .collect()
}

fn is_cyclic(h: PointGroupClass) -> bool {
    matches!(
        h,
        PointGroupClass::Trivial
            | PointGroupClass::C2Rot
            | PointGroupClass::C2Mirror
            | PointGroupClass::C2GlideAxis
            | PointGroupClass::C3
            | PointGroupClass::C4
            | PointGroupClass::C6
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Justification {
    pub class: WallpaperClass,
    pub computed: bool,
    pub reason: String,
}

/// One line per base class explaining where its membership comes from.
pub fn justifications(g: GeometryTag) -> Vec<Justification> {
    let table = flat3_base_table();
    seifert_bases(g)
        .into_iter()
        .map(|c| {
            let h = entry(c).holonomy_class;
            let (computed, reason) = match g {
                GeometryTag::Nil3 => (true, "no reflector curves".to_string()),
                GeometryTag::Flat3 => {
                    let ms: Vec<&str> =
                        table.iter().filter(|m| m.base_classes.contains(&c)).map(|m| m.name).collect();
                    (false, format!("base of {}", ms.join(", ")))
                }
                GeometryTag::E4 if is_cyclic(h) => {
                    (true, format!("cyclic holonomy {}: flat 3-manifold base times S1", h.label()))
                }
                GeometryTag::E4 => (true, format!("dihedral holonomy {}: pulled back over Kb", h.label())),
                GeometryTag::Nil3xE1 => (false, "fibration with general fibre T".to_string()),
                GeometryTag::Nil4 | GeometryTag::Sol3xE1 => {
                    (false, "listed; fibres over S1 or I (computed)".to_string())
                }
            };
            Justification {
                class: c,
                computed,
                reason,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeifertCheck {
    pub id: &'static str,
    pub holds: bool,
    pub detail: String,
}

fn check(id: &'static str, holds: bool, detail: String) -> SeifertCheck {
    SeifertCheck { id, holds, detail }
}

fn names(s: &BTreeSet<WallpaperClass>) -> String {
    let v: Vec<&str> = s.iter().map(|c| c.symbol()).collect();
    format!("{{{}}}", v.join(", "))
}

/// Computed checks of the authored tables against spectra, holonomy,
/// abelianizations and fibrations.
pub fn consistency_checks() -> Vec<SeifertCheck> {
    let mut out = Vec::new();

    let nil3 = seifert_bases(GeometryTag::Nil3);
    let free = no_reflector_classes();
    out.push(check(
        "nil3-no-reflector",
        nil3 == free,
        format!("authored {} / computed {}", names(&nil3), names(&free)),
    ));

    let s1 = s1_action_bases();
    out.push(check(
        "s1-action-orientable",
        s1 == set(&[P1, P2, P4, P3, P6]),
        names(&s1),
    ));

    let union: BTreeSet<WallpaperClass> = seifert_bases(GeometryTag::Flat3);
    let bad_holonomy: BTreeSet<WallpaperClass> = union
        .iter()
        .copied()
        .filter(|c| !entry(*c).holonomy_class.is_cyclic_or_klein())
        .collect();
    out.push(check(
        "flat3-holonomy-cyclic-or-klein",
        bad_holonomy.is_empty(),
        format!("violations {}", names(&bad_holonomy)),
    ));

    let pmm_rank = entry(Pmm).abelianization.mod2_rank();
    let max_rank = union.iter().map(|c| entry(*c).abelianization.mod2_rank()).max().unwrap_or(0);
    out.push(check(
        "flat3-mod2-rank",
        pmm_rank == 4 && max_rank <= 3 && !union.contains(&Pmm),
        format!("pmm rank {pmm_rank}, largest base rank {max_rank}"),
    ));

    let mut expected = free.clone();
    expected.extend([Pm, Cm, Pmg]);
    out.push(check(
        "flat3-union",
        union == expected,
        format!("union {} / expected {}", names(&union), names(&expected)),
    ));

    let fibring = fibring_classes();
    for g in [GeometryTag::Nil4, GeometryTag::Sol3xE1] {
        let s = seifert_bases(g);
        let outside: BTreeSet<WallpaperClass> = s.difference(&fibring).copied().collect();
        out.push(check(
            if g == GeometryTag::Nil4 { "nil4-fibring" } else { "sol3xe1-fibring" },
            outside.is_empty(),
            format!("outside the fibring classes {}", names(&outside)),
        ));
    }

    let e4_missing: BTreeSet<WallpaperClass> = WallpaperClass::ALL
        .into_iter()
        .filter(|c| {
            let h = entry(*c).holonomy_class;
            is_cyclic(h) && !union.contains(c)
        })
        .collect();
    out.push(check(
        "e4-all-classes",
        e4_missing.is_empty() && seifert_bases(GeometryTag::E4).len() == 17,
        format!("cyclic classes without a flat 3-manifold fibration {}", names(&e4_missing)),
    ));
    out
}

/// Questions left open by the source material; recorded, not computed.
pub const OPEN_QUESTIONS: [&str; 2] = [
    "whether every flat 2-orbifold is the base of a Nil3xE1 fibration with general fibre Kb",
    "a simple reason to exclude D(2,-2,-2) (cmm) as a base of a flat 3-manifold",
];
