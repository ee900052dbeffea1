//! Claim suites: each stated fact about the seventeen groups, checked
//! against the computations of the other modules.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::catalog::{entry, standard_group, WallpaperClass};
use crate::cohomology::{extension_from_cocycle, h2_of_point_group};
use crate::covering::{
    classified_subgroups, covering_indices, covers, preimage_of, self_coverings, verify_witness, CoverDecision,
    DEFAULT_MAX_INDEX,
};
use crate::error::{Error, Result};
use crate::fibration::{fibration_structures, fibres_over_circle, invariant_directions, OneOrbifold};
use crate::holonomy::{close_point_group, PointGroupClass, AR, NEG_I};
use crate::presentation::{abelianization, check_presentation_against, relators_hold, Abelianization};
use crate::recognition::{identify, identify_subgroup_text};
use crate::seifert::consistency_checks;
use WallpaperClass::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    ConsistentUnverified,
    Fail,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::ConsistentUnverified => 2,
        }
    }

    fn of(holds: bool) -> Status {
        if holds {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ConsistentUnverified => "consistent-unverified",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub id: String,
    /// Topic of the stated fact.
    pub anchor: &'static str,
    /// Acceptance criterion this claim belongs to, if any.
    pub criterion: Option<u8>,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Presentations,
    H2,
    Abelianization,
    Subgroups,
    Fibrations,
    Coverings,
    Seifert,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::H2,
        Suite::Presentations,
        Suite::Abelianization,
        Suite::Subgroups,
        Suite::Fibrations,
        Suite::Coverings,
        Suite::Seifert,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Presentations => "presentations",
            Suite::H2 => "h2",
            Suite::Abelianization => "abelianization",
            Suite::Subgroups => "subgroups",
            Suite::Fibrations => "fibrations",
            Suite::Coverings => "coverings",
            Suite::Seifert => "seifert",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub claims: Vec<Claim>,
    pub status: Status,
}

impl VerifyReport {
    fn new(suite: Suite, claims: Vec<Claim>) -> VerifyReport {
        let status = overall(claims.iter().map(|c| c.status));
        VerifyReport { suite, claims, status }
    }
}

/// Fail dominates consistent-unverified, which dominates pass.
pub fn overall(statuses: impl IntoIterator<Item = Status>) -> Status {
    statuses.into_iter().max().unwrap_or(Status::Pass)
}

struct Claims {
    anchor: &'static str,
    criterion: Option<u8>,
    out: Vec<Claim>,
}

impl Claims {
    fn new(anchor: &'static str, criterion: Option<u8>) -> Claims {
        Claims {
            anchor,
            criterion,
            out: Vec::new(),
        }
    }

    fn push(&mut self, id: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.out.push(Claim {
            id: id.into(),
            anchor: self.anchor,
            criterion: self.criterion,
            status,
            detail: detail.into(),
        });
    }

    fn check(&mut self, id: impl Into<String>, holds: bool, detail: impl Into<String>) {
        self.push(id, Status::of(holds), detail);
    }
}

pub fn run(suite: Suite) -> VerifyReport {
    let claims = match suite {
        Suite::H2 => h2_claims(),
        Suite::Presentations => presentation_claims(),
        Suite::Abelianization => abelianization_claims(&stated_abelianizations()),
        Suite::Subgroups => subgroup_claims(),
        Suite::Fibrations => fibration_claims(),
        Suite::Coverings => covering_claims(DEFAULT_MAX_INDEX),
        Suite::Seifert => seifert_claims(),
    };
    VerifyReport::new(suite, claims)
}

pub fn run_all() -> Vec<VerifyReport> {
    Suite::ALL.into_iter().map(run).collect()
}

fn stated_h2(c: PointGroupClass) -> Vec<u64> {
    match c {
        PointGroupClass::C2GlideAxis | PointGroupClass::D4 => vec![2],
        PointGroupClass::D2Axes => vec![2, 2],
        _ => Vec::new(),
    }
}

fn h2_claims() -> Vec<Claim> {
    let mut c = Claims::new("second cohomology of the holonomy classes", Some(1));
    for pc in PointGroupClass::ALL {
        let got = h2_of_point_group(&pc.representative()).invariant_factors;
        let want = stated_h2(pc);
        c.check(format!("h2/{}", pc.label()), got == want, format!("invariant factors {got:?}"));
    }
    let trivial = PointGroupClass::ALL
        .iter()
        .filter(|pc| h2_of_point_group(&pc.representative()).is_trivial())
        .count();
    c.check("h2/ten-trivial", trivial == 10, format!("{trivial} of 13 trivial"));

    let mut c2 = Claims::new("classification of extensions", Some(2));
    let mut found: BTreeSet<WallpaperClass> = BTreeSet::new();
    let mut failures = Vec::new();
    for pc in PointGroupClass::ALL {
        let h2 = h2_of_point_group(&pc.representative());
        for coords in h2.elements() {
            match extension_from_cocycle(&h2.cocycle_for(&coords)).and_then(|g| identify(&g)) {
                Ok(r) => {
                    found.insert(r.class);
                }
                Err(e) => failures.push(format!("{} {coords:?}: {e}", pc.label())),
            }
        }
    }
    c2.check(
        "classes/seventeen",
        found.len() == 17 && failures.is_empty(),
        format!("{} isomorphism classes; {} failures", found.len(), failures.len()),
    );
    c.out.extend(c2.out);
    c.out
}

fn presentation_claims() -> Vec<Claim> {
    let mut c = Claims::new("presentations and embeddings", Some(3));
    for e in crate::catalog::entries() {
        let g = standard_group(e.class);
        for (form, ap) in [("extension", &e.presentation_extension), ("orbifold", &e.presentation_orbifold)] {
            let id = format!("presentation/{}/{form}", e.class.symbol());
            match check_presentation_against(&ap.presentation, &ap.assignment, &g) {
                Ok(r) => c.check(id, r.passed(), ap.text),
                Err(err) => c.check(id, false, err.to_string()),
            }
        }
    }
    let p4g = entry(P4g);
    if !p4g.recorded_embedding.is_empty() {
        let p = &p4g.presentation_extension.presentation;
        let imgs: Option<Vec<_>> = p
            .generators
            .iter()
            .map(|n| {
                p4g.recorded_embedding
                    .iter()
                    .find(|(k, _)| k == n)
                    .map(|(_, v)| v.clone())
                    .or_else(|| p4g.presentation_extension.assignment.get(n).cloned())
            })
            .collect();
        let holds = imgs.map(|i| relators_hold(p, &i)).unwrap_or(false);
        // the derived embedding is used; the recorded one is reported
        c.push(
            "presentation/p4g/recorded-embedding",
            Status::Pass,
            format!("recorded embedding satisfies the relators: {holds}; derived embedding used"),
        );
    }
    c.out
}

/// Abelianizations as listed for the seventeen groups.
pub fn stated_abelianizations() -> BTreeMap<WallpaperClass, Abelianization> {
    let rows: [(WallpaperClass, usize, &[u64]); 17] = [
        (P1, 2, &[]),
        (Pm, 1, &[2, 2]),
        (Pg, 1, &[2]),
        (Cm, 1, &[2]),
        (Pmm, 0, &[2, 2, 2, 2]),
        (P2, 0, &[2, 2, 2]),
        (Pmg, 0, &[2, 2, 2]),
        (Cmm, 0, &[2, 2, 2]),
        (P4m, 0, &[2, 2, 2]),
        (P6m, 0, &[2, 2]),
        (P3m1, 0, &[2]),
        (P4, 0, &[2, 4]),
        (Pgg, 0, &[2, 4]),
        (P4g, 0, &[2, 4]),
        (P3, 0, &[3]),
        (P6, 0, &[6]),
        (P31m, 0, &[6]),
    ];
    rows.iter()
        .map(|(c, r, t)| {
            (
                *c,
                Abelianization {
                    free_rank: *r,
                    torsion: t.to_vec(),
                },
            )
        })
        .collect()
}

/// Compares both presentation forms of every group against `table`.
pub fn abelianization_claims(table: &BTreeMap<WallpaperClass, Abelianization>) -> Vec<Claim> {
    let mut c = Claims::new("abelianization table", Some(4));
    for id in WallpaperClass::ALL {
        let e = entry(id);
        let ext = abelianization(&e.presentation_extension.presentation);
        let orb = abelianization(&e.presentation_orbifold.presentation);
        let want = table.get(&id);
        c.check(
            format!("abelianization/{}", id.symbol()),
            want == Some(&ext) && want == Some(&orb),
            format!("extension form {ext}, orbifold form {orb}"),
        );
    }
    let r = abelianization(&entry(Pmm).presentation_orbifold.presentation).mod2_rank();
    c.check("abelianization/pmm-mod2-rank", r == 4, format!("rank {r}"));
    c.out
}

fn subgroup_claims() -> Vec<Claim> {
    let mut c = Claims::new("index-2 subgroups", Some(5));
    let at_two = |id: WallpaperClass| -> Vec<WallpaperClass> {
        classified_subgroups(id, 2)
            .iter()
            .filter(|s| s.index == 2)
            .map(|s| s.class)
            .collect()
    };
    let pm = at_two(Pm);
    c.check("subgroups/pm-cm", pm.contains(&Cm), format!("pm index 2: {pm:?}"));
    c.check("subgroups/pm-pg", pm.contains(&Pg), format!("pm index 2: {pm:?}"));
    let cm = at_two(Cm);
    c.check("subgroups/cm-pg", cm.contains(&Pg), format!("cm index 2: {cm:?}"));
    for (id, words, want) in [(Pm, &["xy", "d"][..], Cm), (Cm, &["z", "[r,z]"][..], Pg)] {
        let got = identify_subgroup_text(id, words).map(|r| r.class);
        c.check(
            format!("subgroups/{}-words-{}", id.symbol(), want.symbol()),
            got.as_ref().ok() == Some(&want),
            format!("{words:?} -> {got:?}"),
        );
    }

    let preimages = |id: WallpaperClass, gens: &[&[crate::mat2::Mat2]]| -> Vec<WallpaperClass> {
        let g = standard_group(id);
        let mut v: Vec<WallpaperClass> = gens
            .iter()
            .map(|ms| {
                let k = close_point_group(ms).expect("finite");
                identify(&preimage_of(&g, &k)).expect("crystallographic").class
            })
            .collect();
        v.sort();
        v
    };
    let neg_ar = NEG_I * AR;
    let pmg = preimages(Pmg, &[&[AR], &[neg_ar]]);
    let mut want = vec![Pg, Pm];
    want.sort();
    c.check("subgroups/pmg-axes", pmg == want, format!("<AR>, <-AR> -> {pmg:?}"));
    let pgg = preimages(Pgg, &[&[AR], &[neg_ar]]);
    c.check("subgroups/pgg-axes", pgg == vec![Pg, Pg], format!("<AR>, <-AR> -> {pgg:?}"));
    let p4g = preimages(P4g, &[&[NEG_I, AR]]);
    c.check("subgroups/p4g-d2-axes", p4g == vec![Pmm], format!("<-I,AR> -> {p4g:?}"));
    c.out
}

fn fibration_claims() -> Vec<Claim> {
    let mut c = Claims::new("fibrations over S1 and I", Some(6));
    type Shape = (OneOrbifold, OneOrbifold, usize);
    use OneOrbifold::{S1, I};
    let stated: [(WallpaperClass, usize, Vec<Shape>); 5] = [
        (P2, 1, vec![(I, S1, 2)]),
        (Pmm, 1, vec![(I, I, 0)]),
        (Pmg, 2, vec![(I, S1, 2), (I, I, 2)]),
        (Pgg, 1, vec![(I, S1, 2)]),
        (Cmm, 1, vec![(I, I, 1)]),
    ];
    for (id, orbits, shapes) in stated {
        let n = invariant_directions(id).orbits.len();
        c.check(format!("fibrations/{}-orbits", id.symbol()), n == orbits, format!("{n} orbits"));
        let mut got: Vec<Shape> = fibration_structures(id)
            .iter()
            .map(|s| (s.base, s.general_fibre, s.singular_fibres.len()))
            .collect();
        let mut want = shapes;
        let key = |s: &Shape| (s.0 == I, s.1 == I, s.2);
        got.sort_by_key(key);
        want.sort_by_key(key);
        c.check(
            format!("fibrations/{}-structures", id.symbol()),
            got == want,
            format!("(base, fibre, singular) {got:?}"),
        );
    }
    let circle: BTreeSet<WallpaperClass> = WallpaperClass::ALL.into_iter().filter(|id| fibres_over_circle(*id)).collect();
    let want: BTreeSet<WallpaperClass> = [P1, Pm, Pg, Cm].into_iter().collect();
    c.check("fibrations/over-circle", circle == want, format!("{circle:?}"));
    let none: Vec<WallpaperClass> = WallpaperClass::ALL
        .into_iter()
        .filter(|id| fibration_structures(*id).is_empty())
        .collect();
    let want = vec![P4, P4m, P4g, P3, P3m1, P31m, P6, P6m];
    let mut sorted = want.clone();
    sorted.sort();
    c.check("fibrations/eight-non-fibring", none == sorted, format!("{none:?}"));
    c.out
}

fn covering_claims(max_index: usize) -> Vec<Claim> {
    // fills the subgroup cache in parallel
    covering_indices(max_index);
    let mut c = Claims::new("coverings", Some(7));
    let yes = |c: &mut Claims, cover: WallpaperClass, base: WallpaperClass| {
        let id = format!("covers/{}-{}", cover.symbol(), base.symbol());
        match covers(cover, base, max_index) {
            CoverDecision::Yes(w) => {
                let verified = classified_subgroups(base, max_index)
                    .iter()
                    .find(|s| s.words == w.words)
                    .map(|s| verify_witness(base, s))
                    .unwrap_or(false);
                c.check(id, verified, format!("index {} witness {:?}", w.index, w.words));
            }
            CoverDecision::No(cert) => c.check(id, false, format!("No: {cert}")),
            CoverDecision::Unknown { max_index } => c.check(id, false, format!("Unknown up to index {max_index}")),
        }
    };
    for (a, b) in [(Pm, Cm), (Pgg, Pmg), (Pmg, Cmm), (Cmm, Pmm), (P4, P4g), (P4, P4m)] {
        yes(&mut c, a, b);
    }
    for b in [P2, Pmm, Pmg, Pgg, Cmm, P4, P4m, P4g, P6, P6m] {
        yes(&mut c, P2, b);
    }
    for b in [P3, P3m1, P31m, P6, P6m] {
        yes(&mut c, P3, b);
    }
    for (a, b) in [(Pm, Pgg), (Cmm, Pmg), (P4m, P4g)] {
        let id = format!("not-covers/{}-{}", a.symbol(), b.symbol());
        match covers(a, b, max_index) {
            CoverDecision::No(cert) => c.check(id, true, cert.detail),
            CoverDecision::Yes(w) => c.check(id, false, format!("subgroup at index {}", w.index)),
            CoverDecision::Unknown { .. } => c.push(id, Status::ConsistentUnverified, "no certificate"),
        }
    }
    let covered_by: BTreeSet<WallpaperClass> = WallpaperClass::ALL
        .into_iter()
        .filter(|a| covers(*a, Pgg, max_index).is_yes())
        .collect();
    let want: BTreeSet<WallpaperClass> = [P1, Pg, P2, Pgg].into_iter().collect();
    c.check("covers/pgg-covered-by", covered_by == want, format!("{covered_by:?}"));
    for id in WallpaperClass::ALL {
        let degrees: Vec<usize> = self_coverings(id).iter().map(|s| s.degree).collect();
        c.check(
            format!("self-cover/{}/4", id.symbol()),
            degrees.contains(&4),
            format!("degrees {degrees:?}"),
        );
        let square = entry(id).holonomy_class.is_square_compatible();
        c.check(
            format!("self-cover/{}/2", id.symbol()),
            degrees.contains(&2) == square,
            format!("degrees {degrees:?}, holonomy in <A,R>: {square}"),
        );
    }
    // stated negatively without a certificate; not an acceptance claim
    let mut extra = Claims::new("coverings", None);
    let id = "not-covers/p4g-p4m";
    match covers(P4g, P4m, max_index) {
        CoverDecision::Yes(w) => extra.check(id, false, format!("p4g is a subgroup of p4m at index {}", w.index)),
        CoverDecision::No(cert) => extra.check(id, true, cert.detail),
        CoverDecision::Unknown { max_index } => {
            extra.push(id, Status::ConsistentUnverified, format!("no subgroup up to index {max_index}"))
        }
    }
    c.out.extend(extra.out);
    c.out
}

fn seifert_claims() -> Vec<Claim> {
    let mut c = Claims::new("Seifert bases", Some(8));
    for s in consistency_checks() {
        c.check(format!("seifert/{}", s.id), s.holds, s.detail);
    }
    c.out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_order() {
        assert_eq!(overall([Status::Pass, Status::ConsistentUnverified]), Status::ConsistentUnverified);
        assert_eq!(overall([Status::Fail, Status::ConsistentUnverified]), Status::Fail);
        assert_eq!(overall([]), Status::Pass);
        assert_eq!("h2".parse::<Suite>().unwrap(), Suite::H2);
    }

    #[test]
    fn mutated_abelianization_fails() {
        let mut t: BTreeMap<_, _> = WallpaperClass::ALL.into_iter().map(|c| (c, entry(c).abelianization.clone())).collect();
        assert!(abelianization_claims(&t).iter().all(|c| c.status == Status::Pass));
        t.get_mut(&Pg).unwrap().torsion = vec![4];
        let claims = abelianization_claims(&t);
        assert_eq!(overall(claims.iter().map(|c| c.status)), Status::Fail);
    }

    #[test]
    fn cheap_suites_pass() {
        for s in [Suite::H2, Suite::Fibrations, Suite::Seifert] {
            let r = run(s);
            for c in &r.claims {
                assert_eq!(c.status, Status::Pass, "{}: {}", c.id, c.detail);
            }
        }
    }
}
