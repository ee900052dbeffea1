//! Acceptance gate: one line per criterion. Criteria 1-8 are the claim
//! suites grouped by criterion number; criterion 9 is the property suite,
//! checked against independent oracles.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wallpaper_core::affine::AffineElement;
use wallpaper_core::catalog::{entry, standard_group, WallpaperClass};
use wallpaper_core::covering::classified_subgroups;
use wallpaper_core::linalg::{hermite_normal_form, int, rat, smith_normal_form, sublattices_of_index, Int, IntMatrix};
use wallpaper_core::mat2::Mat2;
use wallpaper_core::recognition::identify;
use wallpaper_core::verify::{run_all, Status};

/// Default seed; `WALLPAPER_SEED` overrides it.
const SEED: u64 = 0x5eed_2d17;

struct Outcome {
    pass: bool,
    detail: String,
}

fn det_i64(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det_i64(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from determinantal divisors: `d_k` is the gcd of
/// the k-by-k minors and the k-th factor is `d_k / d_{k-1}`.
fn oracle_invariant_factors(m: &[Vec<i64>]) -> Vec<i64> {
    let (r, c) = (m.len(), m[0].len());
    let mut out = Vec::new();
    let mut prev = 1i64;
    for k in 1..=r.min(c) {
        let mut d = 0i64;
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let minor: Vec<Vec<i64>> = rows.iter().map(|i| cols.iter().map(|j| m[*i][*j]).collect()).collect();
                d = num_integer::gcd(d, det_i64(&minor));
            }
        }
        if d == 0 {
            out.push(0);
            prev = 0;
        } else {
            out.push(d / prev);
            prev = d;
        }
    }
    out
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for _ in 0..6 {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let mut e = IntMatrix::identity(n);
        e[(i, j)] = int(rng.gen_range(-2..=2));
        u = &e * &u;
    }
    u
}

fn is_row_hnf(h: &IntMatrix) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut zero_seen = false;
    for i in 0..h.rows() {
        let row = h.row(i);
        match row.iter().position(|x| *x != Int::from(0)) {
            None => zero_seen = true,
            Some(p) => {
                if zero_seen || last_pivot.is_some_and(|q| p <= q) || row[p] <= Int::from(0) {
                    return false;
                }
                for k in 0..i {
                    let a = &h[(k, p)];
                    if *a < Int::from(0) || *a >= row[p] {
                        return false;
                    }
                }
                last_pivot = Some(p);
            }
        }
    }
    true
}

fn snf_hnf_oracle(rng: &mut ChaCha8Rng) -> Outcome {
    let mut bad = Vec::new();
    for trial in 0..200 {
        let n = if trial % 2 == 0 { 2 } else { 3 };
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-5..=5)).collect()).collect();
        let m = IntMatrix::from_rows(&rows);
        let snf = smith_normal_form(&m);
        let got: Vec<i64> = snf
            .invariant_factors
            .iter()
            .map(|x| num_traits::ToPrimitive::to_i64(x).unwrap())
            .collect();
        let reconstructed = &(&snf.u * &m) * &snf.v;
        if got != oracle_invariant_factors(&rows) || reconstructed != snf.s {
            bad.push(format!("snf {rows:?}"));
        }
        let (h, u) = hermite_normal_form(&m);
        let unimodular = num_traits::Signed::abs(&u.determinant()) == Int::from(1);
        let again = hermite_normal_form(&(&random_unimodular(rng, n) * &m)).0;
        if &u * &m != h || !unimodular || !is_row_hnf(&h) || again != h {
            bad.push(format!("hnf {rows:?}"));
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!("200 matrices, {} disagreements {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()),
    }
}

fn random_gl2(rng: &mut ChaCha8Rng) -> Mat2 {
    let moves = [
        Mat2::new(1, 1, 0, 1),
        Mat2::new(1, -1, 0, 1),
        Mat2::new(1, 0, 1, 1),
        Mat2::new(1, 0, -1, 1),
        Mat2::new(0, 1, 1, 0),
    ];
    let mut u = Mat2::IDENTITY;
    for _ in 0..rng.gen_range(1..6) {
        u = u * moves[rng.gen_range(0..moves.len())];
    }
    u
}

fn conjugation_invariance(rng: &mut ChaCha8Rng) -> Outcome {
    let mut bad = Vec::new();
    for c in WallpaperClass::ALL {
        let g = standard_group(c);
        for _ in 0..25 {
            let u = random_gl2(rng);
            let t = [rat(rng.gen_range(-6..=6), rng.gen_range(1..=6)), rat(rng.gen_range(-6..=6), rng.gen_range(1..=6))];
            let h = g.conjugate(&AffineElement::new(u, t));
            match identify(&h) {
                Ok(r) if r.class == c => {}
                other => bad.push(format!("{c}: {:?}", other.map(|r| r.class))),
            }
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!("17 x 25 conjugates, {} misidentified", bad.len()),
    }
}

fn index_two_counts() -> Outcome {
    let mut bad = Vec::new();
    for c in WallpaperClass::ALL {
        let r = entry(c).abelianization.mod2_rank() as u32;
        let n = classified_subgroups(c, 2).iter().filter(|s| s.index == 2).count();
        if n != (1usize << r) - 1 {
            bad.push(format!("{c}: {n} vs 2^{r}-1"));
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!("index-2 counts {bad:?}"),
    }
}

fn sublattice_counts() -> Outcome {
    let bad: Vec<u64> = (1..=12u64)
        .filter(|n| {
            let sigma: u64 = (1..=*n).filter(|d| n % d == 0).sum();
            sublattices_of_index(*n).len() as u64 != sigma
        })
        .collect();
    Outcome {
        pass: bad.is_empty(),
        detail: format!("sigma(n) for n <= 12, mismatches at {bad:?}"),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let reports = run_all();
    let claims: Vec<_> = reports.iter().flat_map(|r| r.claims.iter()).collect();
    let mut all_pass = true;
    for n in 1..=8u8 {
        let mine: Vec<_> = claims.iter().filter(|c| c.criterion == Some(n)).collect();
        let failed: Vec<String> = mine
            .iter()
            .filter(|c| c.status != Status::Pass)
            .map(|c| format!("{} ({})", c.id, c.detail))
            .collect();
        let pass = !mine.is_empty() && failed.is_empty();
        all_pass &= pass;
        println!(
            "criterion {n}: {} ({}/{} claims){}",
            if pass { "PASS" } else { "FAIL" },
            mine.len() - failed.len(),
            mine.len(),
            if failed.is_empty() { String::new() } else { format!(" failing: {}", failed.join("; ")) }
        );
    }
    let t = Instant::now();
    let seed = std::env::var("WALLPAPER_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(SEED);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parts = [
        ("snf/hnf oracle", snf_hnf_oracle(&mut rng)),
        ("conjugation invariance", conjugation_invariance(&mut rng)),
        ("index-2 counts", index_two_counts()),
        ("sublattice counts", sublattice_counts()),
    ];
    let pass = parts.iter().all(|(_, o)| o.pass);
    all_pass &= pass;
    let details: Vec<String> = parts.iter().map(|(n, o)| format!("{n}: {}", o.detail)).collect();
    println!(
        "criterion 9: {} ({:.1}s, seed {seed}) {}",
        if pass { "PASS" } else { "FAIL" },
        t.elapsed().as_secs_f64(),
        details.join("; ")
    );
    println!("total {:.1}s", start.elapsed().as_secs_f64());
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
