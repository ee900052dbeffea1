//! The seventeen groups: identifiers, authored presentations with their
//! affine images, orbifold signatures and abelianizations.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use crate::affine::{group_from_generators, AffineElement, CrystalGroup};
use crate::cohomology::{extension_from_cocycle, h2_of_point_group};
use crate::error::{Error, Result};
use crate::holonomy::{PointGroupClass, A, AR, B, NEG_I, R};
use crate::linalg::{rat, Rat};
use crate::mat2::{vec_from_ints, vec_neg, Mat2, Vec2};
use crate::presentation::{evaluate_word, relators_hold, Abelianization, Assignment, FinitePresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum WallpaperClass {
    P1,
    P2,
    Pm,
    Pg,
    Cm,
    Pmm,
    Pmg,
    Pgg,
    Cmm,
    P4,
    P4m,
    P4g,
    P3,
    P3m1,
    P31m,
    P6,
    P6m,
}

use WallpaperClass::*;

impl WallpaperClass {
    pub const ALL: [WallpaperClass; 17] = [
        P1, P2, Pm, Pg, Cm, Pmm, Pmg, Pgg, Cmm, P4, P4m, P4g, P3, P3m1, P31m, P6, P6m,
    ];

    /// International (crystallographic) symbol.
    pub fn symbol(self) -> &'static str {
        match self {
            P1 => "p1",
            P2 => "p2",
            Pm => "pm",
            Pg => "pg",
            Cm => "cm",
            Pmm => "pmm",
            Pmg => "pmg",
            Pgg => "pgg",
            Cmm => "cmm",
            P4 => "p4",
            P4m => "p4m",
            P4g => "p4g",
            P3 => "p3",
            P3m1 => "p3m1",
            P31m => "p31m",
            P6 => "p6",
            P6m => "p6m",
        }
    }

    /// Orbifold name in ASCII: a `*` marks a corner reflector.
    pub fn orbifold_ascii(self) -> &'static str {
        match self {
            P1 => "T",
            P2 => "S(2,2,2,2)",
            Pm => "A",
            Pg => "Kb",
            Cm => "Mb",
            Pmm => "D(*2,*2,*2,*2)",
            Pmg => "D(2,2)",
            Pgg => "P(2,2)",
            Cmm => "D(2,*2,*2)",
            P4 => "S(2,4,4)",
            P4m => "D(*2,*4,*4)",
            P4g => "D(*2,4)",
            P3 => "S(3,3,3)",
            P3m1 => "D(*3,*3,*3)",
            P31m => "D(3,*3)",
            P6 => "S(2,3,6)",
            P6m => "D(*2,*3,*6)",
        }
    }

    /// Orbifold name with blackboard letters and overlines.
    pub fn orbifold_unicode(self) -> &'static str {
        match self {
            P1 => "T",
            P2 => "S(2,2,2,2)",
            Pm => "𝔸",
            Pg => "Kb",
            Cm => "𝕄b",
            Pmm => "𝔻(2̄,2̄,2̄,2̄)",
            Pmg => "𝔻(2,2)",
            Pgg => "P(2,2)",
            Cmm => "𝔻(2,2̄,2̄)",
            P4 => "S(2,4,4)",
            P4m => "𝔻(2̄,4̄,4̄)",
            P4g => "𝔻(2̄,4)",
            P3 => "S(3,3,3)",
            P3m1 => "𝔻(3̄,3̄,3̄)",
            P31m => "𝔻(3,3̄)",
            P6 => "S(2,3,6)",
            P6m => "𝔻(2̄,3̄,6̄)",
        }
    }
}

impl fmt::Display for WallpaperClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for WallpaperClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        WallpaperClass::ALL
            .into_iter()
            .find(|c| {
                c.symbol().eq_ignore_ascii_case(t)
                    || c.orbifold_ascii() == t
                    || c.orbifold_unicode() == t
            })
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

impl Serialize for CatalogEntry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CatalogEntry", 12)?;
        st.serialize_field("id", self.class.symbol())?;
        st.serialize_field("orbifold", self.class.orbifold_ascii())?;
        st.serialize_field("orbifold_unicode", self.class.orbifold_unicode())?;
        st.serialize_field("holonomy_class", self.holonomy_class.label())?;
        st.serialize_field("holonomy_generators", self.holonomy_class.generator_notation())?;
        st.serialize_field("extension_coordinates", &self.extension_coordinates)?;
        st.serialize_field("affine_generators", &self.affine_generators)?;
        st.serialize_field("presentation_extension", &self.presentation_extension.presentation)?;
        st.serialize_field("presentation_orbifold", &self.presentation_orbifold.presentation)?;
        st.serialize_field("signature", &self.signature)?;
        st.serialize_field("abelianization", &self.abelianization.to_string())?;
        st.serialize_field("notes", &self.notes)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbifoldSignature {
    pub orientable: bool,
    pub cone_orders: Vec<u32>,
    pub has_reflector_boundary: bool,
    pub corner_orders: Vec<u32>,
    pub underlying: &'static str,
}

impl OrbifoldSignature {
    /// Euler characteristic of the underlying surface.
    pub fn underlying_euler_characteristic(&self) -> i64 {
        match self.underlying {
            "sphere" => 2,
            "disc" | "projective plane" => 1,
            _ => 0,
        }
    }

    /// `chi(X) - sum (1 - 1/n) over cones - 1/2 sum (1 - 1/m) over corners`.
    pub fn euler_characteristic(&self) -> Rat {
        let one = rat(1, 1);
        let mut chi = rat(self.underlying_euler_characteristic(), 1);
        for &n in &self.cone_orders {
            chi -= &one - rat(1, n as i64);
        }
        for &m in &self.corner_orders {
            chi -= (&one - rat(1, m as i64)) * rat(1, 2);
        }
        chi
    }
}

/// A presentation with the affine images of its generators.
#[derive(Clone, Debug)]
pub struct AuthoredPresentation {
    pub text: &'static str,
    pub presentation: FinitePresentation,
    pub assignment: Assignment,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub class: WallpaperClass,
    pub holonomy_class: PointGroupClass,
    /// Class in H² of the holonomy (in (e, f) form for `<-I, AR>`).
    pub extension_coordinates: Vec<u64>,
    /// All coordinates whose extensions are isomorphic to this group.
    pub equivalent_coordinates: Vec<Vec<u64>>,
    pub affine_generators: Vec<(String, AffineElement)>,
    pub presentation_extension: AuthoredPresentation,
    pub presentation_orbifold: AuthoredPresentation,
    /// Definitions of the orbifold generators as words in the extension
    /// generators.
    pub orbifold_definitions: Vec<(&'static str, &'static str)>,
    pub signature: OrbifoldSignature,
    pub abelianization: Abelianization,
    /// An embedding stated with the presentation, where one is given, as
    /// recorded (it need not satisfy the relators).
    pub recorded_embedding: Vec<(String, AffineElement)>,
    pub notes: Vec<String>,
}

impl CatalogEntry {
    /// Images of every named generator of both presentations.
    pub fn named_elements(&self) -> Assignment {
        let mut all = self.presentation_extension.assignment.clone();
        for (k, v) in &self.presentation_orbifold.assignment {
            all.entry(k.clone()).or_insert_with(|| v.clone());
        }
        all
    }

    /// Generator names of both presentations, extension names first.
    pub fn generator_names(&self) -> Vec<String> {
        let mut names = self.presentation_extension.presentation.generators.clone();
        for g in &self.presentation_orbifold.presentation.generators {
            if !names.contains(g) {
                names.push(g.clone());
            }
        }
        names
    }
}

struct Authored {
    class: WallpaperClass,
    holonomy: PointGroupClass,
    coords: &'static [u64],
    equivalent: &'static [&'static [u64]],
    /// Holonomy generators of the extension presentation with their
    /// translation parts (as numerator/denominator pairs).
    lifts: &'static [(&'static str, Mat2, [(i64, i64); 2])],
    ext: &'static str,
    orb: &'static str,
    defs: &'static [(&'static str, &'static str)],
    orientable: bool,
    cones: &'static [u32],
    reflector: bool,
    corners: &'static [u32],
    underlying: &'static str,
    abelianization: (usize, &'static [u64]),
    notes: &'static [&'static str],
}

const Z: (i64, i64) = (0, 1);
const HALF: (i64, i64) = (1, 2);
const MHALF: (i64, i64) = (-1, 2);
const B2: Mat2 = Mat2::new(-1, -1, 1, 0);
const BR: Mat2 = Mat2::new(-1, 0, 1, 1);

fn authored() -> Vec<Authored> {
    vec![
        Authored {
            class: P1,
            holonomy: PointGroupClass::Trivial,
            coords: &[],
            equivalent: &[&[]],
            lifts: &[],
            ext: "<x,y | xy = yx>",
            orb: "<x,y | xy = yx>",
            defs: &[("x", "x"), ("y", "y")],
            orientable: true,
            cones: &[],
            reflector: false,
            corners: &[],
            underlying: "torus",
            abelianization: (2, &[]),
            notes: &["abelian"],
        },
        Authored {
            class: P2,
            holonomy: PointGroupClass::C2Rot,
            coords: &[],
            equivalent: &[&[]],
            lifts: &[("j", NEG_I, [Z, Z])],
            ext: "<x,y,j | xy = yx, jxj = x^-1, jyj = y^-1, j^2 = 1>",
            orb: "<j,u,v | j^2 = u^2 = v^2 = (juv)^2 = 1>",
            defs: &[("j", "j"), ("u", "jx"), ("v", "jy")],
            orientable: true,
            cones: &[2, 2, 2, 2],
            reflector: false,
            corners: &[],
            underlying: "sphere",
            abelianization: (0, &[2, 2, 2]),
            notes: &["D_inf *_Z D_inf", "Z x| D_inf (normal subgroup <ju>)"],
        },
        Authored {
            class: Pm,
            holonomy: PointGroupClass::C2GlideAxis,
            coords: &[0],
            equivalent: &[&[0]],
            lifts: &[("d", AR, [Z, Z])],
            ext: "<x,y,d | xy = yx, dx = xd, dyd = y^-1, d^2 = 1>",
            orb: "<d,u,x | dx = xd, ux = xu, d^2 = u^2 = 1>",
            defs: &[("d", "d"), ("u", "dy"), ("x", "x")],
            orientable: false,
            cones: &[],
            reflector: true,
            corners: &[],
            underlying: "annulus",
            abelianization: (1, &[2, 2]),
            notes: &["Z x D_inf", "(Z + Z/2) *_Z (Z + Z/2)", "split extension"],
        },
        Authored {
            class: Pg,
            holonomy: PointGroupClass::C2GlideAxis,
            coords: &[1],
            equivalent: &[&[1]],
            lifts: &[("d", AR, [HALF, Z])],
            ext: "<x,y,d | xy = yx, d^2 = x, dyd^-1 = y^-1>",
            orb: "<d,u | d^2 = u^2>",
            defs: &[("d", "d"), ("u", "dy")],
            orientable: false,
            cones: &[],
            reflector: false,
            corners: &[],
            underlying: "Klein bottle",
            abelianization: (1, &[2]),
            notes: &["Z x|_-1 Z", "Z *_Z Z", "non-split extension", "centre <x>"],
        },
        Authored {
            class: Cm,
            holonomy: PointGroupClass::C2Mirror,
            coords: &[],
            equivalent: &[&[]],
            lifts: &[("r", R, [Z, Z])],
            ext: "<x,y,r | xy = yx, rxr = y, r^2 = 1>",
            orb: "<r,z | rz^2 = z^2r, r^2 = 1>",
            defs: &[("r", "r"), ("z", "xr")],
            orientable: false,
            cones: &[],
            reflector: true,
            corners: &[],
            underlying: "Mobius band",
            abelianization: (1, &[2]),
            notes: &["Z *_Z (Z + Z/2)", "D_inf x|_tau Z", "centre <xy>"],
        },
        Authored {
            class: Pmm,
            holonomy: PointGroupClass::D2Axes,
            coords: &[0, 0],
            equivalent: &[&[0, 0]],
            lifts: &[("d", AR, [Z, Z]), ("j", NEG_I, [Z, Z])],
            ext: "<x,y,d,j | xy = yx, dx = xd, dyd = y^-1, jxj = x^-1, jyj = y^-1, d^2 = j^2 = (dj)^2 = 1>",
            orb: "<d,j,s,t | d^2 = j^2 = s^2 = t^2 = (st)^2 = (tj)^2 = (jd)^2 = (ds)^2 = 1>",
            // orbifold j is the reflection jd: with j = (-I, 0), (tj)^2 = 1 fails
            defs: &[("d", "d"), ("j", "jd"), ("s", "jdx"), ("t", "dy")],
            orientable: false,
            cones: &[],
            reflector: true,
            corners: &[2, 2, 2, 2],
            underlying: "disc",
            abelianization: (0, &[2, 2, 2, 2]),
            notes: &["D_inf x D_inf", "(D_inf x Z/2) *_D_inf (D_inf x Z/2)", "split extension (e,f) = (0,0)",
                "orbifold generator j is the reflection jd of the extension presentation",
            ],
        },
        Authored {
            class: Pmg,
            holonomy: PointGroupClass::D2Axes,
            coords: &[1, 0],
            equivalent: &[&[1, 0], &[0, 1]],
            lifts: &[("d", AR, [Z, MHALF]), ("j", NEG_I, [Z, Z])],
            ext: "<x,y,d,j | xy = yx, jxj = x^-1, y = (jd)^2, dx = xd, d^2 = j^2 = 1>",
            orb: "<d,j,v | djv = jvd, d^2 = j^2 = v^2 = 1>",
            defs: &[("d", "d"), ("j", "j"), ("v", "jx")],
            orientable: false,
            cones: &[2, 2],
            reflector: true,
            corners: &[],
            underlying: "disc",
            abelianization: (0, &[2, 2, 2]),
            notes: &["(Z + Z/2) *_Z D_inf", "D_inf *_D_inf D_inf", "(e,f) = (1,0); (0,1) gives an isomorphic group"],
        },
        Authored {
            class: Pgg,
            holonomy: PointGroupClass::D2Axes,
            coords: &[1, 1],
            equivalent: &[&[1, 1]],
            lifts: &[("d", AR, [HALF, Z]), ("j", NEG_I, [HALF, HALF])],
            ext: "<x,y,d,j | xy = yx, d^2 = x, (jd)^2 = y, jd^2j = d^-2, d^2(jd)^2 = (jd)^2d^2, j^2 = 1>",
            orb: "<d,j | (jd^2)^2 = j^2 = 1>",
            defs: &[("d", "d"), ("j", "j")],
            orientable: false,
            cones: &[2, 2],
            reflector: false,
            corners: &[],
            underlying: "projective plane",
            abelianization: (0, &[2, 4]),
            notes: &["Z *_Z D_inf", "(e,f) = (1,1)"],
        },
        Authored {
            class: Cmm,
            holonomy: PointGroupClass::D2Mixed,
            coords: &[],
            equivalent: &[&[]],
            lifts: &[("j", NEG_I, [Z, Z]), ("r", R, [Z, Z])],
            ext: "<x,y,j,r | xy = yx, jxj = x^-1, jyj = y^-1, j^2 = 1, rxr = y, r^2 = (jr)^2 = 1>",
            orb: "<r,u,z | r^2 = u^2 = z^2 = (rz)^2 = (zuru)^2 = 1>",
            defs: &[("r", "r"), ("u", "jx"), ("z", "jr")],
            orientable: false,
            cones: &[2],
            reflector: true,
            corners: &[2, 2],
            underlying: "disc",
            abelianization: (0, &[2, 2, 2]),
            notes: &["D_inf x| D_inf", "(D_inf x Z/2) *_D_inf D_inf"],
        },
        Authored {
            class: P4,
            holonomy: PointGroupClass::C4,
            coords: &[],
            equivalent: &[&[]],
            lifts: &[("a", A, [Z, Z])],
            ext: "<x,y,a | xy = yx, axa^-1 = y^-1, aya^-1 = x, a^4 = 1>",
            orb: "<a,j | a^4 = j^2 = (aj)^4 = 1>",
            defs: &[("a", "a"), ("j", "a^2x")],
            orientable: true,
            cones: &[2, 4, 4],
            reflector: false,
            corners: &[],
            underlying: "sphere",
            abelianization: (0, &[2, 4]),
            notes: &["centre trivial"],
        },
        Authored {
            class: P4m,
            holonomy: PointGroupClass::D4,
            coords: &[0],
            equivalent: &[&[0]],
            lifts: &[("a", A, [Z, Z]), ("r", R, [Z, Z])],
            ext: "<x,y,a,r | xy = yx, axa^-1 = y^-1, aya^-1 = x, rxr = y, a^4 = r^2 = 1, (ar)^2 = 1>",
            orb: "<r,w,z | r^2 = w^2 = z^2 = (rz)^4 = (zw)^2 = (wr)^4 = 1>",
            defs: &[("r", "r"), ("w", "ar"), ("z", "a^2xar")],
            orientable: false,
            cones: &[],
            reflector: true,
            corners: &[2, 4, 4],
            underlying: "disc",
            abelianization: (0, &[2, 2, 2]),
            notes: &["split extension (e = 0)"],
        },
        Authored {
            class: P4g,
            holonomy: PointGroupClass::D4,
            coords: &[1],
            equivalent: &[&[1]],
            // replaced by lifts derived from the nonzero class
            lifts: &[],
            ext: "<x,y,a,r | xy = yx, axa^-1 = y^-1, aya^-1 = x, rxr = y, a^4 = r^2 = 1, (ar)^2 = x>",
            orb: "<a,r | a^4 = r^2 = (rara^-1)^2 = 1>",
            defs: &[("a", "a"), ("r", "r")],
            orientable: false,
            cones: &[4],
            reflector: true,
            corners: &[2],
            underlying: "disc",
            abelianization: (0, &[2, 4]),
            notes: &[
                "non-split extension (e = 1)",
                "index-2 subgroup over <-I,AR> is the split extension (pmm)",
                "extension relator written (ar)^2 = x: ar acts on the lattice as diag(1,-1), so (ar)^2 is a power of x; (ar)^2 = y^e with e = 1 would force y^2 = 1",
                "recorded embedding r -> (R, e1/2) gives r^2 = (I, (e1+e2)/2), not 1; lifts are derived from the nonzero class of H^2(<A,R>)",
            ],
        },
        Authored {
            class: P3,
            holonomy: PointGroupClass::C3,
            coords: &[],
            equivalent: &[&[]],
            lifts: &[("c", B2, [Z, Z])],
            ext: "<x,y,c | xy = yx, cxc^-1 = x^-1y, cyc^-1 = x^-1, c^3 = 1>",
            orb: "<c,u | c^3 = u^3 = (cu)^3 = 1>",
            defs: &[("c", "c"), ("u", "cx")],
            orientable: true,
            cones: &[3, 3, 3],
            reflector: false,
            corners: &[],
            underlying: "sphere",
            abelianization: (0, &[3, 3]),
            notes: &[],
        },
        Authored {
            class: P3m1,
            holonomy: PointGroupClass::D3Long,
            coords: &[],
            equivalent: &[&[]],
            lifts: &[("c", B2, [Z, Z]), ("r", R, [Z, Z])],
            ext: "<x,y,c,r | xy = yx, cxc^-1 = x^-1y, cyc^-1 = x^-1, c^3 = 1, rxr = y, r^2 = (rc)^2 = 1>",
            orb: "<r,s,t | r^2 = s^2 = t^2 = (rs)^3 = (st)^3 = (tr)^3 = 1>",
            defs: &[("r", "r"), ("s", "rc"), ("t", "crx")],
            orientable: false,
            cones: &[],
            reflector: true,
            corners: &[3, 3, 3],
            underlying: "disc",
            abelianization: (0, &[2]),
            notes: &[],
        },
        Authored {
            class: P31m,
            holonomy: PointGroupClass::D3Short,
            coords: &[],
            equivalent: &[&[]],
            lifts: &[("c", B2, [Z, Z]), ("n", BR, [Z, Z])],
            ext: "<x,y,c,n | xy = yx, cxc^-1 = x^-1y, cyc^-1 = x^-1, c^3 = 1, nxn = x^-1y, ny = yn, n^2 = (nc)^2 = 1>",
            orb: "<c,w | w^2 = c^3 = (c^-1wcw)^3 = 1>",
            // the rotation about the origin lies on a mirror; cx turns about the cone point
            defs: &[("c", "cx"), ("w", "nx^2y^-1")],
            orientable: false,
            cones: &[3],
            reflector: true,
            corners: &[3],
            underlying: "disc",
            abelianization: (0, &[6]),
            notes: &[
                "orbifold generator c is cx of the extension presentation",
                "<c,v,w | c^3 = v^2 = w^2 = 1, w = cvc^-1> with v = nx^-1y^-1 presents Z/3 * Z/2, which is not crystallographic",
            ],
        },
        Authored {
            class: P6,
            holonomy: PointGroupClass::C6,
            coords: &[],
            equivalent: &[&[]],
            lifts: &[("b", B, [Z, Z])],
            ext: "<x,y,b | xy = yx, bxb^-1 = y, byb^-1 = x^-1y, b^6 = 1>",
            orb: "<b,v | b^6 = v^3 = (bv)^2 = 1>",
            defs: &[("b", "b"), ("v", "b^2x")],
            orientable: true,
            cones: &[2, 3, 6],
            reflector: false,
            corners: &[],
            underlying: "sphere",
            abelianization: (0, &[6]),
            notes: &[],
        },
        Authored {
            class: P6m,
            holonomy: PointGroupClass::D6,
            coords: &[],
            equivalent: &[&[]],
            lifts: &[("b", B, [Z, Z]), ("r", R, [Z, Z])],
            ext: "<x,y,b,r | xy = yx, bxb^-1 = y, byb^-1 = x^-1y, b^6 = 1, rxr = y, r^2 = (rb)^2 = 1>",
            orb: "<m,n,p | m^2 = n^2 = p^2 = (mn)^6 = (np)^3 = (pm)^2 = 1>",
            // m = brb^-1, n = br, p = rbxy^-2 satisfy the relators but generate a
            // group with a different lattice
            defs: &[("m", "br"), ("n", "r"), ("p", "b^4ry")],
            orientable: false,
            cones: &[],
            reflector: true,
            corners: &[2, 3, 6],
            underlying: "disc",
            abelianization: (0, &[2, 2]),
            notes: &["orbifold generators: m = br, n = r, p = b^4ry"],
        },
    ]
}

fn frac_vec(t: &[(i64, i64); 2]) -> Vec2 {
    [rat(t[0].0, t[0].1), rat(t[1].0, t[1].1)]
}

fn lattice_gens() -> Vec<(String, AffineElement)> {
    vec![
        ("x".to_string(), AffineElement::translation(vec_from_ints(1, 0))),
        ("y".to_string(), AffineElement::translation(vec_from_ints(0, 1))),
    ]
}

/// Lifts `a = (A, 0)` and `r` for the non-split extension of `<A, R>`,
/// derived from the nonzero cohomology class: the extension is conjugated
/// by a rational translation so that `t_A = 0`, and `r` is the first lift
/// (lattice offsets in `[-1, 1]^2`) satisfying the extension relators.
fn p4g_lifts(ext: &FinitePresentation) -> Vec<(String, AffineElement)> {
    let h = PointGroupClass::D4.representative();
    let h2 = h2_of_point_group(&h);
    let g0 = extension_from_cocycle(&h2.cocycle_for(&[1])).expect("basis cocycle");
    // (I - A) v = -t_A
    let t_a = g0.translation_part(&A).unwrap().clone();
    let ima = crate::affine::rat_mat_inverse(&crate::affine::rat_mat_of(&A.sub_identity().neg()));
    let v = crate::affine::rat_mat_apply(&ima, &vec_neg(&t_a));
    let g = g0.conjugate(&AffineElement::translation(v));
    let t_r = g.translation_part(&R).unwrap().clone();
    let a = AffineElement::linear(A);
    for i in -1..=1 {
        for k in -1..=1 {
            let r = AffineElement::new(R, crate::mat2::vec_add(&t_r, &vec_from_ints(i, k)));
            let mut imgs: Vec<AffineElement> = lattice_gens().into_iter().map(|(_, e)| e).collect();
            imgs.push(a.clone());
            imgs.push(r.clone());
            if relators_hold(ext, &imgs) {
                return vec![("a".to_string(), a), ("r".to_string(), r)];
            }
        }
    }
    panic!("no lift of R satisfies the p4g relators");
}

fn build(a: &Authored) -> CatalogEntry {
    let ext = FinitePresentation::parse(a.ext).expect("authored presentation parses");
    let orb = FinitePresentation::parse(a.orb).expect("authored presentation parses");
    let lifts: Vec<(String, AffineElement)> = if a.class == P4g {
        p4g_lifts(&ext)
    } else {
        a.lifts
            .iter()
            .map(|(n, m, t)| (n.to_string(), AffineElement::new(*m, frac_vec(t))))
            .collect()
    };
    let mut ext_assign = Assignment::new();
    for (n, e) in lattice_gens().into_iter().chain(lifts.iter().cloned()) {
        ext_assign.insert(n, e);
    }
    let ext_images: Vec<AffineElement> = ext
        .generators
        .iter()
        .map(|g| ext_assign[g].clone())
        .collect();
    let mut orb_assign = Assignment::new();
    for (name, word) in a.defs {
        let w = ext.word(word).expect("definition parses");
        orb_assign.insert(name.to_string(), evaluate_word(&w, &ext_images));
    }
    let mut affine_generators = lattice_gens();
    affine_generators.extend(lifts);
    let recorded_embedding = match a.class {
        Pg => vec![
            ("y".to_string(), AffineElement::translation(vec_from_ints(0, 1))),
            ("d".to_string(), AffineElement::new(AR, [rat(1, 2), rat(0, 1)])),
        ],
        Pmg => vec![
            ("d".to_string(), AffineElement::new(AR, [rat(0, 1), rat(-1, 2)])),
            ("j".to_string(), AffineElement::linear(NEG_I)),
            ("v".to_string(), AffineElement::new(NEG_I, vec_from_ints(-1, 0))),
        ],
        Pgg => vec![
            ("d".to_string(), AffineElement::new(AR, [rat(1, 2), rat(0, 1)])),
            ("j".to_string(), AffineElement::new(NEG_I, [rat(1, 2), rat(1, 2)])),
        ],
        P4g => vec![
            ("a".to_string(), AffineElement::linear(A.inverse())),
            ("j".to_string(), AffineElement::new(NEG_I, vec_from_ints(-1, 0))),
            ("r".to_string(), AffineElement::new(R, [rat(1, 2), rat(0, 1)])),
        ],
        _ => Vec::new(),
    };
    CatalogEntry {
        class: a.class,
        holonomy_class: a.holonomy,
        extension_coordinates: a.coords.to_vec(),
        equivalent_coordinates: a.equivalent.iter().map(|c| c.to_vec()).collect(),
        affine_generators,
        presentation_extension: AuthoredPresentation {
            text: a.ext,
            presentation: ext,
            assignment: ext_assign,
        },
        presentation_orbifold: AuthoredPresentation {
            text: a.orb,
            presentation: orb,
            assignment: orb_assign,
        },
        orbifold_definitions: a.defs.to_vec(),
        signature: OrbifoldSignature {
            orientable: a.orientable,
            cone_orders: a.cones.to_vec(),
            has_reflector_boundary: a.reflector,
            corner_orders: a.corners.to_vec(),
            underlying: a.underlying,
        },
        abelianization: Abelianization {
            free_rank: a.abelianization.0,
            torsion: a.abelianization.1.to_vec(),
        },
        recorded_embedding,
        notes: a.notes.iter().map(|s| s.to_string()).collect(),
    }
}

struct Atlas {
    entries: Vec<CatalogEntry>,
    groups: Vec<CrystalGroup>,
}

fn atlas() -> &'static Atlas {
    static ATLAS: OnceLock<Atlas> = OnceLock::new();
    ATLAS.get_or_init(|| {
        let entries: Vec<CatalogEntry> = authored().iter().map(build).collect();
        let groups = entries
            .iter()
            .map(|e| {
                let gens: Vec<AffineElement> =
                    e.affine_generators.iter().map(|(_, g)| g.clone()).collect();
                group_from_generators(&gens).expect("authored generators form a crystallographic group")
            })
            .collect();
        Atlas { entries, groups }
    })
}

fn position(id: WallpaperClass) -> usize {
    WallpaperClass::ALL.iter().position(|c| *c == id).unwrap()
}

pub fn entry(id: WallpaperClass) -> &'static CatalogEntry {
    &atlas().entries[position(id)]
}

pub fn entries() -> &'static [CatalogEntry] {
    &atlas().entries
}

pub fn standard_group(id: WallpaperClass) -> CrystalGroup {
    atlas().groups[position(id)].clone()
}

/// Images under the catalog assignment of words over the generator names of
/// both presentations of `id`.
pub fn evaluate_named_words(id: WallpaperClass, words: &[&str]) -> Result<Vec<AffineElement>> {
    let e = entry(id);
    let names = e.generator_names();
    let named = e.named_elements();
    let imgs: Vec<AffineElement> = names.iter().map(|n| named[n].clone()).collect();
    words
        .iter()
        .map(|w| {
            let parsed = crate::presentation::parse_word(w, &names)?;
            Ok(evaluate_word(&parsed, &imgs))
        })
        .collect()
}

pub fn by_name(name: &str) -> Result<WallpaperClass> {
    name.parse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::classify_point_group;

    #[test]
    fn names_are_bijective() {
        for c in WallpaperClass::ALL {
            assert_eq!(c.symbol().parse::<WallpaperClass>().unwrap(), c);
            assert_eq!(c.orbifold_ascii().parse::<WallpaperClass>().unwrap(), c);
            assert_eq!(c.orbifold_unicode().parse::<WallpaperClass>().unwrap(), c);
        }
        assert!("p5".parse::<WallpaperClass>().is_err());
    }

    #[test]
    fn entry_examples() {
        let pg = entry(Pg);
        assert_eq!(pg.holonomy_class, PointGroupClass::C2GlideAxis);
        assert_eq!(pg.abelianization.to_string(), "Z + Z/2");
        assert_eq!(entry(P6m).holonomy_class, PointGroupClass::D6);
        assert_eq!(entry(P6m).abelianization.to_string(), "(Z/2)^2");
        assert_eq!(entry(P1).holonomy_class, PointGroupClass::Trivial);
    }

    #[test]
    fn euler_characteristics_vanish() {
        for e in entries() {
            assert_eq!(e.signature.euler_characteristic(), rat(0, 1), "{}", e.class);
        }
    }

    #[test]
    fn standard_groups_have_authored_holonomy() {
        for c in WallpaperClass::ALL {
            let g = standard_group(c);
            assert!(g.is_standard_lattice(), "{c}");
            assert_eq!(classify_point_group(g.holonomy()), entry(c).holonomy_class, "{c}");
        }
    }

    #[test]
    fn p4g_lifts_satisfy_relators() {
        let e = entry(P4g);
        let a = &e.presentation_extension.assignment["a"];
        assert_eq!(*a, AffineElement::linear(A));
        let r = &e.presentation_extension.assignment["r"];
        assert!(r.compose(r).is_identity());
        // the recorded datum fails r^2 = 1
        let rec = &e.recorded_embedding[2].1;
        assert!(!rec.compose(rec).is_identity());
    }

    #[test]
    fn authored_data_matches_computation() {
        use crate::cohomology::class_of_group;
        use crate::presentation::{abelianization, check_presentation_against};
        for e in entries() {
            let g = standard_group(e.class);
            let (_, coords) = class_of_group(&g);
            assert!(e.equivalent_coordinates.contains(&coords), "{}: {:?}", e.class, coords);
            assert_eq!(coords, e.extension_coordinates, "{}", e.class);
            for ap in [&e.presentation_extension, &e.presentation_orbifold] {
                let chk = check_presentation_against(&ap.presentation, &ap.assignment, &g).unwrap();
                assert!(chk.passed(), "{} {}: {:?}", e.class, ap.text, chk);
                assert_eq!(abelianization(&ap.presentation), e.abelianization, "{} {}", e.class, ap.text);
            }
            let sp = g.finite_subgroup_spectrum();
            let mut cones = e.signature.cone_orders.clone();
            cones.sort();
            let mut corners = e.signature.corner_orders.clone();
            corners.sort();
            assert_eq!(sp.cone_orders, cones, "{}", e.class);
            assert_eq!(sp.corner_orders, corners, "{}", e.class);
            assert_eq!(sp.has_reflection, e.signature.has_reflector_boundary, "{}", e.class);
        }
    }

    #[test]
    fn named_words() {
        let v = evaluate_named_words(Pgg, &["d^2", "(jd)^2"]).unwrap();
        assert_eq!(v[0], AffineElement::translation(vec_from_ints(1, 0)));
        assert_eq!(v[1], AffineElement::translation(vec_from_ints(0, 1)));
        let v = evaluate_named_words(Pmg, &["(jd)^2"]).unwrap();
        assert_eq!(v[0], AffineElement::translation(vec_from_ints(0, 1)));
        assert!(entry(Cm).named_elements().contains_key("z"));
    }
}
