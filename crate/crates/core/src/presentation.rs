//! Finitely presented groups: words, abelianization, Todd-Coxeter coset
//! enumeration, low-index subgroups and Reidemeister-Schreier rewriting.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::affine::{group_from_generators, AffineElement, CrystalGroup};
use crate::error::{Error, Result};
use crate::linalg::{lattice_basis, smith_normal_form, Int, IntMatrix};
use crate::mat2::Vec2;

/// A word in the generators: `(generator index, exponent)` with exponent
/// `+1` or `-1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<(usize, i8)>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn generator(g: usize) -> Word {
        Word(vec![(g, 1)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<(usize, i8)> = Vec::with_capacity(self.0.len());
        for &(g, e) in &self.0 {
            match out.last() {
                Some(&(h, f)) if h == g && f == -e => {
                    out.pop();
                }
                _ => out.push((g, e)),
            }
        }
        Word(out)
    }

    /// Free and cyclic reduction.
    pub fn cyclic_reduce(&self) -> Word {
        let mut w = self.free_reduce().0;
        while w.len() >= 2 {
            let (a, b) = (w[0], w[w.len() - 1]);
            if a.0 == b.0 && a.1 == -b.1 {
                w.pop();
                w.remove(0);
            } else {
                break;
            }
        }
        Word(w)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::new();
        for _ in 0..n.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word(v)
    }

    /// `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, ngens: usize) -> Vec<i64> {
        let mut v = vec![0i64; ngens];
        for &(g, e) in &self.0 {
            v[g] += e as i64;
        }
        v
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let sep = if names.iter().all(|n| n.chars().count() == 1) {
            ""
        } else {
            "*"
        };
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let (g, e) = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == (g, e) {
                run += 1;
            }
            let k = run as i64 * e as i64;
            parts.push(if k == 1 {
                names[g].clone()
            } else {
                format!("{}^{}", names[g], k)
            });
            i += run;
        }
        parts.join(sep)
    }
}

/// `<generators | relators>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Serialize for FinitePresentation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string().serialize(s)
    }
}

impl fmt::Display for FinitePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| r.display(&self.generators)).collect();
        write!(f, "<{} | {}>", self.generators.join(","), rels.join(", "))
    }
}

impl FinitePresentation {
    pub fn new(generators: &[&str], relators: Vec<Word>) -> FinitePresentation {
        let mut p = FinitePresentation {
            generators: generators.iter().map(|s| s.to_string()).collect(),
            relators: Vec::new(),
        };
        for r in relators {
            p.push_relator(r);
        }
        p
    }

    fn push_relator(&mut self, r: Word) {
        let r = r.free_reduce();
        if !r.is_empty() {
            self.relators.push(r);
        }
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Parses `<a, j | a^4 = j^2 = (aj)^4 = 1>`. Chained equalities
    /// `u = v = w` give the relators `u v^-1` and `v w^-1`; `[u, v]` is the
    /// commutator. Angle brackets may be ASCII or Unicode.
    pub fn parse(text: &str) -> Result<FinitePresentation> {
        let t = text.trim();
        let inner = t
            .strip_prefix('<')
            .or_else(|| t.strip_prefix('\u{27e8}'))
            .and_then(|s| s.strip_suffix('>').or_else(|| s.strip_suffix('\u{27e9}')))
            .ok_or_else(|| parse_error(1, "expected a presentation `<gens | rels>`"))?;
        let (gens, rels) = inner
            .split_once('|')
            .ok_or_else(|| parse_error(1, "missing `|`"))?;
        let generators: Vec<String> = gens
            .split(',')
            .map(|g| g.trim().to_string())
            .filter(|g| !g.is_empty())
            .collect();
        let mut p = FinitePresentation {
            generators,
            relators: Vec::new(),
        };
        for rel in split_top_level(rels) {
            if rel.trim().is_empty() {
                continue;
            }
            let sides: Vec<Word> = rel
                .split('=')
                .map(|side| parse_word(side, &p.generators))
                .collect::<Result<_>>()?;
            if sides.len() == 1 {
                p.push_relator(sides[0].clone());
            } else if sides.last().is_some_and(Word::is_empty) {
                for w in &sides[..sides.len() - 1] {
                    p.push_relator(w.clone());
                }
            } else {
                for w in sides.windows(2) {
                    p.push_relator(w[0].concat(&w[1].inverse()));
                }
            }
        }
        Ok(p)
    }

    pub fn word(&self, text: &str) -> Result<Word> {
        parse_word(text, &self.generators)
    }
}

fn parse_error(column: usize, message: &str) -> Error {
    Error::Parse {
        line: 1,
        column,
        message: message.to_string(),
    }
}

/// Splits at commas that are not inside brackets.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Parses a word: juxtaposition or `*`, `^` with integer exponents,
/// parentheses, commutators `[u, v]`, and `1` for the identity. Generator
/// names are matched longest first.
pub fn parse_word(text: &str, generators: &[String]) -> Result<Word> {
    let mut p = WordParser {
        chars: text.chars().collect(),
        pos: 0,
        generators,
    };
    let w = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(w.free_reduce())
}

struct WordParser<'a> {
    chars: Vec<char>,
    pos: usize,
    generators: &'a [String],
}

impl WordParser<'_> {
    fn error(&self, message: &str) -> Error {
        parse_error(self.pos + 1, message)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Word> {
        let mut w = Word::empty();
        loop {
            match self.peek() {
                None | Some(')') | Some(']') | Some(',') => return Ok(w),
                Some('*') => {
                    self.pos += 1;
                }
                _ => {
                    let f = self.factor()?;
                    w = w.concat(&f);
                }
            }
        }
    }

    fn factor(&mut self) -> Result<Word> {
        let base = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let w = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                w
            }
            Some('[') => {
                self.pos += 1;
                let a = self.expr()?;
                if self.peek() != Some(',') {
                    return Err(self.error("expected `,` in commutator"));
                }
                self.pos += 1;
                let b = self.expr()?;
                if self.peek() != Some(']') {
                    return Err(self.error("expected `]`"));
                }
                self.pos += 1;
                Word::commutator(&a, &b)
            }
            Some('1') => {
                self.pos += 1;
                Word::empty()
            }
            Some(_) => self.generator()?,
            None => return Err(self.error("unexpected end of word")),
        };
        if self.peek() == Some('^') {
            self.pos += 1;
            let n = self.integer()?;
            Ok(base.pow(n))
        } else {
            Ok(base)
        }
    }

    fn generator(&mut self) -> Result<Word> {
        let rest: String = self.chars[self.pos..].iter().collect();
        let best = self
            .generators
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.is_empty() && rest.starts_with(g.as_str()))
            .max_by_key(|(_, g)| g.len());
        match best {
            Some((i, g)) => {
                self.pos += g.chars().count();
                Ok(Word::generator(i))
            }
            None => Err(self.error("unknown generator")),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        if self.chars.get(self.pos) == Some(&'{') {
            // tolerate `x^{-1}`
            self.pos += 1;
            let n = self.integer()?;
            if self.chars.get(self.pos) != Some(&'}') {
                return Err(self.error("expected `}`"));
            }
            self.pos += 1;
            return Ok(n);
        }
        while matches!(self.chars.get(self.pos), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| parse_error(start + 1, "expected an exponent"))
    }
}

pub type Assignment = BTreeMap<String, AffineElement>;

/// Images of the generators of `p` in order.
pub fn images(p: &FinitePresentation, assign: &Assignment) -> Result<Vec<AffineElement>> {
    p.generators
        .iter()
        .map(|g| {
            assign
                .get(g)
                .cloned()
                .ok_or_else(|| Error::UnboundGenerator(g.clone()))
        })
        .collect()
}

/// Left-to-right product of the images.
pub fn evaluate_word(w: &Word, images: &[AffineElement]) -> AffineElement {
    let inverses: Vec<AffineElement> = images.iter().map(|g| g.inverse()).collect();
    w.0.iter().fold(AffineElement::identity(), |acc, &(g, e)| {
        if e > 0 {
            acc.compose(&images[g])
        } else {
            acc.compose(&inverses[g])
        }
    })
}

pub fn verify_homomorphism(p: &FinitePresentation, assign: &Assignment) -> Result<bool> {
    let imgs = images(p, assign)?;
    Ok(relators_hold(p, &imgs))
}

pub fn relators_hold(p: &FinitePresentation, imgs: &[AffineElement]) -> bool {
    p.relators.iter().all(|r| evaluate_word(r, imgs).is_identity())
}

/// Free rank plus torsion invariant factors of an abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Abelianization {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl Abelianization {
    /// Dimension of `H_1(-; F_2)`.
    pub fn mod2_rank(&self) -> usize {
        self.free_rank + self.torsion.iter().filter(|t| *t % 2 == 0).count()
    }

    pub fn from_relation_matrix(m: &IntMatrix) -> Abelianization {
        let ngens = m.cols();
        if m.rows() == 0 {
            return Abelianization {
                free_rank: ngens,
                torsion: Vec::new(),
            };
        }
        let snf = smith_normal_form(m);
        Abelianization {
            free_rank: ngens - snf.rank,
            torsion: snf.torsion().iter().map(|t| t.to_u64().unwrap()).collect(),
        }
    }
}

impl fmt::Display for Abelianization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
        for t in &self.torsion {
            *counts.entry(*t).or_default() += 1;
        }
        for (t, k) in counts.iter().rev() {
            if *k == 1 {
                parts.push(format!("Z/{t}"));
            } else {
                parts.push(format!("(Z/{t})^{k}"));
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

pub fn abelianization(p: &FinitePresentation) -> Abelianization {
    let rows: Vec<Vec<Int>> = p
        .relators
        .iter()
        .map(|r| r.exponent_sums(p.ngens()).into_iter().map(Int::from).collect())
        .collect();
    if rows.is_empty() {
        return Abelianization {
            free_rank: p.ngens(),
            torsion: Vec::new(),
        };
    }
    Abelianization::from_relation_matrix(&IntMatrix::from_int_rows(rows))
}

const NONE: usize = usize::MAX;
pub const DEFAULT_MAX_COSETS: usize = 100_000;

/// A complete coset table. Column `2g` is generator `g`, column `2g + 1`
/// its inverse; coset 0 is the subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CosetTable {
    pub ngens: usize,
    pub table: Vec<Vec<usize>>,
    pub subgroup_generators: Vec<Word>,
}

fn col(g: usize, e: i8) -> usize {
    if e > 0 {
        2 * g
    } else {
        2 * g + 1
    }
}

fn word_cols(w: &Word) -> Vec<usize> {
    w.0.iter().map(|&(g, e)| col(g, e)).collect()
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.table.len()
    }

    pub fn act(&self, coset: usize, w: &Word) -> usize {
        w.0.iter().fold(coset, |c, &(g, e)| self.table[c][col(g, e)])
    }

    /// The coset action of generator `g` as a permutation.
    pub fn permutation(&self, g: usize) -> Vec<usize> {
        self.table.iter().map(|row| row[2 * g]).collect()
    }

    /// Checks that the actions are permutations, relators act trivially and
    /// the subgroup generators fix coset 0.
    pub fn is_valid_for(&self, p: &FinitePresentation) -> bool {
        let n = self.index();
        for c in 0..n {
            for g in 0..self.ngens {
                let d = self.table[c][2 * g];
                if d >= n || self.table[d][2 * g + 1] != c {
                    return false;
                }
            }
        }
        (0..n).all(|c| p.relators.iter().all(|r| self.act(c, r) == c))
            && self.subgroup_generators.iter().all(|w| self.act(0, w) == 0)
    }

    /// Words for coset representatives along a breadth-first spanning tree.
    pub fn transversal(&self) -> Vec<Word> {
        let n = self.index();
        let mut reps: Vec<Option<Word>> = vec![None; n];
        reps[0] = Some(Word::empty());
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for x in 0..2 * self.ngens {
                let d = self.table[c][x];
                if reps[d].is_none() {
                    let (g, e) = (x / 2, if x % 2 == 0 { 1 } else { -1 });
                    reps[d] = Some(reps[c].as_ref().unwrap().concat(&Word(vec![(g, e)])));
                    queue.push_back(d);
                }
            }
        }
        reps.into_iter().map(|w| w.expect("coset table is connected")).collect()
    }

    /// Renumbers cosets in breadth-first order from coset 0.
    fn standardize(&mut self) {
        let n = self.index();
        let mut order = vec![0usize];
        let mut new_of = vec![NONE; n];
        new_of[0] = 0;
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            for x in 0..2 * self.ngens {
                let d = self.table[c][x];
                if new_of[d] == NONE {
                    new_of[d] = order.len();
                    order.push(d);
                }
            }
            i += 1;
        }
        self.table = order
            .iter()
            .map(|&c| self.table[c].iter().map(|&d| new_of[d]).collect())
            .collect();
    }
}

struct Enumerator<'a> {
    ncols: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    live: usize,
    max: usize,
    relators: &'a [Vec<usize>],
    queue: VecDeque<usize>,
}

fn inv_col(x: usize) -> usize {
    x ^ 1
}

impl Enumerator<'_> {
    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = c;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<usize> {
        if self.live >= self.max {
            return Err(Error::TableOverflow { max: self.max });
        }
        let d = self.table.len();
        self.table.push(vec![NONE; self.ncols]);
        self.parent.push(d);
        self.live += 1;
        self.table[c][x] = d;
        self.table[d][inv_col(x)] = c;
        Ok(d)
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo;
        self.live -= 1;
        self.queue.push_back(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        while let Some(e) = self.queue.pop_front() {
            for x in 0..self.ncols {
                let f = self.table[e][x];
                if f == NONE {
                    continue;
                }
                self.table[f][inv_col(x)] = NONE;
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                if self.table[e1][x] != NONE {
                    let t = self.table[e1][x];
                    self.merge(f1, t);
                } else if self.table[f1][inv_col(x)] != NONE {
                    let t = self.table[f1][inv_col(x)];
                    self.merge(e1, t);
                } else {
                    self.table[e1][x] = f1;
                    self.table[f1][inv_col(x)] = e1;
                }
            }
        }
    }

    /// Scans `w` at coset `c`, defining new cosets when `fill` is set.
    fn scan(&mut self, c: usize, w: &[usize], fill: bool) -> Result<()> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.table[f][w[i]] != NONE {
                f = self.table[f][w[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.table[b][inv_col(w[j as usize])] != NONE {
                b = self.table[b][inv_col(w[j as usize])];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.table[f][w[i]] = b;
                self.table[b][inv_col(w[i])] = f;
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    fn lookahead(&mut self) -> Result<()> {
        let mut c = 0;
        while c < self.table.len() {
            if self.alive(c) {
                for r in 0..self.relators.len() {
                    if !self.alive(c) {
                        break;
                    }
                    let w = self.relators[r].clone();
                    self.scan(c, &w, false)?;
                }
            }
            c += 1;
        }
        Ok(())
    }
}

/// Todd-Coxeter enumeration of the cosets of `<subgens>` (HLT strategy with
/// lookahead when the table fills up).
pub fn coset_enumeration(
    p: &FinitePresentation,
    subgens: &[Word],
    max_cosets: usize,
) -> Result<CosetTable> {
    let ncols = 2 * p.ngens();
    let relators: Vec<Vec<usize>> = p.relators.iter().map(word_cols).collect();
    let mut en = Enumerator {
        ncols,
        table: vec![vec![NONE; ncols]],
        parent: vec![0],
        live: 1,
        max: max_cosets.max(1),
        relators: &relators,
        queue: VecDeque::new(),
    };
    for s in subgens {
        let w = word_cols(&s.free_reduce());
        let r0 = en.rep(0);
        en.scan(r0, &w, true)?;
    }
    let mut c = 0;
    while c < en.table.len() {
        if en.alive(c) {
            let step = (|| -> Result<()> {
                for r in 0..relators.len() {
                    if !en.alive(c) {
                        break;
                    }
                    en.scan(c, &relators[r], true)?;
                }
                for x in 0..ncols {
                    if en.alive(c) && en.table[c][x] == NONE {
                        en.define(c, x)?;
                    }
                }
                Ok(())
            })();
            if let Err(Error::TableOverflow { .. }) = step {
                en.lookahead()?;
                if en.live >= en.max {
                    return Err(Error::TableOverflow { max: en.max });
                }
                // retry this coset with the freed space
                continue;
            }
        }
        c += 1;
    }
    // Compact the live cosets.
    let live: Vec<usize> = (0..en.table.len()).filter(|&c| en.alive(c)).collect();
    let mut new_of = vec![NONE; en.table.len()];
    for (i, &c) in live.iter().enumerate() {
        new_of[c] = i;
    }
    let mut table: Vec<Vec<usize>> = Vec::with_capacity(live.len());
    for &c in &live {
        let mut row = Vec::with_capacity(ncols);
        for x in 0..ncols {
            let d = en.table[c][x];
            if d == NONE {
                return Err(Error::Inconsistent("incomplete coset table".into()));
            }
            let r = en.rep(d);
            row.push(new_of[r]);
        }
        table.push(row);
    }
    let mut t = CosetTable {
        ngens: p.ngens(),
        table,
        subgroup_generators: subgens.to_vec(),
    };
    t.standardize();
    if !t.is_valid_for(p) {
        return Err(Error::Inconsistent("coset table fails relator check".into()));
    }
    Ok(t)
}

/// Index of `<subgens>` in the group presented by `p`.
pub fn subgroup_index(p: &FinitePresentation, subgens: &[Word], max_cosets: usize) -> Result<usize> {
    Ok(coset_enumeration(p, subgens, max_cosets)?.index())
}

/// Conjugacy-class representatives of the subgroups of index at most `n`,
/// by Sims' backtrack over partial coset tables with canonicity pruning.
pub fn low_index_subgroups(p: &FinitePresentation, n: usize) -> Vec<CosetTable> {
    let ncols = 2 * p.ngens();
    let relators: Vec<Vec<usize>> = p.relators.iter().map(word_cols).collect();
    let mut search = LowIndex {
        ncols,
        max: n,
        relators,
        out: Vec::new(),
    };
    let table = vec![vec![NONE; ncols]];
    if p.ngens() == 0 {
        return vec![CosetTable {
            ngens: 0,
            table: vec![vec![]],
            subgroup_generators: Vec::new(),
        }];
    }
    search.descend(table);
    let mut out: Vec<CosetTable> = search
        .out
        .into_iter()
        .map(|table| {
            let mut t = CosetTable {
                ngens: p.ngens(),
                table,
                subgroup_generators: Vec::new(),
            };
            t.subgroup_generators = reidemeister_schreier(p, &t);
            t
        })
        .collect();
    out.sort_by(|a, b| a.index().cmp(&b.index()).then_with(|| a.table.cmp(&b.table)));
    out
}

struct LowIndex {
    ncols: usize,
    max: usize,
    relators: Vec<Vec<usize>>,
    out: Vec<Vec<Vec<usize>>>,
}

impl LowIndex {
    fn descend(&mut self, table: Vec<Vec<usize>>) {
        let Some((c, x)) = first_undefined(&table) else {
            self.out.push(table);
            return;
        };
        let n = table.len();
        let ix = inv_col(x);
        let mut targets: Vec<usize> = (0..n).filter(|&d| table[d][ix] == NONE).collect();
        if n < self.max {
            targets.push(n);
        }
        for d in targets {
            let mut t = table.clone();
            if d == n {
                t.push(vec![NONE; self.ncols]);
            }
            t[c][x] = d;
            t[d][ix] = c;
            if self.deduce(&mut t) && is_canonical(&t) {
                self.descend(t);
            }
        }
    }

    /// Closes the table under relator deductions; false on a contradiction.
    fn deduce(&self, t: &mut [Vec<usize>]) -> bool {
        loop {
            let mut changed = false;
            for c in 0..t.len() {
                for r in &self.relators {
                    match scan_deduce(t, c, r) {
                        ScanResult::Conflict => return false,
                        ScanResult::Deduced => changed = true,
                        ScanResult::Nothing => {}
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }
}

enum ScanResult {
    Nothing,
    Deduced,
    Conflict,
}

fn scan_deduce(t: &mut [Vec<usize>], c: usize, w: &[usize]) -> ScanResult {
    if w.is_empty() {
        return ScanResult::Nothing;
    }
    let (mut f, mut b) = (c, c);
    let (mut i, mut j) = (0usize, w.len() as isize - 1);
    while (i as isize) <= j && t[f][w[i]] != NONE {
        f = t[f][w[i]];
        i += 1;
    }
    if (i as isize) > j {
        return if f == b {
            ScanResult::Nothing
        } else {
            ScanResult::Conflict
        };
    }
    while j >= i as isize && t[b][inv_col(w[j as usize])] != NONE {
        b = t[b][inv_col(w[j as usize])];
        j -= 1;
    }
    if j < i as isize {
        return if f == b {
            ScanResult::Nothing
        } else {
            ScanResult::Conflict
        };
    }
    if j == i as isize {
        let x = w[i];
        if t[b][inv_col(x)] != NONE {
            return ScanResult::Conflict;
        }
        t[f][x] = b;
        t[b][inv_col(x)] = f;
        return ScanResult::Deduced;
    }
    ScanResult::Nothing
}

fn first_undefined(t: &[Vec<usize>]) -> Option<(usize, usize)> {
    for (c, row) in t.iter().enumerate() {
        for (x, &d) in row.iter().enumerate() {
            if d == NONE {
                return Some((c, x));
            }
        }
    }
    None
}

/// A table is canonical if no other base point yields a lexicographically
/// smaller breadth-first renumbering.
fn is_canonical(t: &[Vec<usize>]) -> bool {
    let n = t.len();
    let ncols = t[0].len();
    for beta in 1..n {
        let mut new_of = vec![NONE; n];
        let mut order = vec![beta];
        new_of[beta] = 0;
        'compare: for new_c in 0..n {
            if new_c >= order.len() {
                break;
            }
            let old_c = order[new_c];
            for x in 0..ncols {
                let a = t[new_c][x];
                let b_old = t[old_c][x];
                if a == NONE || b_old == NONE {
                    break 'compare;
                }
                if new_of[b_old] == NONE {
                    new_of[b_old] = order.len();
                    order.push(b_old);
                }
                let b = new_of[b_old];
                if b < a {
                    return false;
                }
                if b > a {
                    break 'compare;
                }
            }
        }
    }
    true
}

/// Schreier generators `rep(c) g rep(cg)^-1` for the non-tree edges,
/// freely reduced, trivial ones dropped.
pub fn reidemeister_schreier(_p: &FinitePresentation, t: &CosetTable) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    for (_, w) in schreier_data(t).1 {
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

type SchreierIndex = BTreeMap<(usize, usize), usize>;

/// Transversal, and the Schreier generators keyed by `(coset, generator)`.
fn schreier_data(t: &CosetTable) -> (Vec<Word>, Vec<((usize, usize), Word)>) {
    let reps = t.transversal();
    let mut gens = Vec::new();
    for c in 0..t.index() {
        for g in 0..t.ngens {
            let d = t.table[c][2 * g];
            let w = reps[c]
                .concat(&Word::generator(g))
                .concat(&reps[d].inverse())
                .free_reduce();
            if !w.is_empty() {
                gens.push(((c, g), w));
            }
        }
    }
    (reps, gens)
}

/// The Reidemeister-Schreier presentation of the subgroup described by `t`,
/// with generators `s0, s1, ...` in the order of [`reidemeister_schreier`]'s
/// underlying list (before deduplication), and the words they stand for.
pub fn reidemeister_schreier_presentation(
    p: &FinitePresentation,
    t: &CosetTable,
) -> (FinitePresentation, Vec<Word>) {
    let (_, gens) = schreier_data(t);
    let index: SchreierIndex = gens.iter().enumerate().map(|(i, (k, _))| (*k, i)).collect();
    let names: Vec<String> = (0..gens.len()).map(|i| format!("s{i}")).collect();
    let mut relators = Vec::new();
    for c in 0..t.index() {
        for r in &p.relators {
            let mut d = c;
            let mut w = Vec::new();
            for &(g, e) in &r.0 {
                if e > 0 {
                    if let Some(&s) = index.get(&(d, g)) {
                        w.push((s, 1));
                    }
                    d = t.table[d][2 * g];
                } else {
                    let prev = t.table[d][2 * g + 1];
                    if let Some(&s) = index.get(&(prev, g)) {
                        w.push((s, -1));
                    }
                    d = prev;
                }
            }
            let w = Word(w).free_reduce();
            if !w.is_empty() {
                relators.push(w);
            }
        }
    }
    let words = gens.into_iter().map(|(_, w)| w).collect();
    (
        FinitePresentation {
            generators: names,
            relators,
        },
        words,
    )
}

/// Abelianization of the subgroup described by a complete coset table.
pub fn subgroup_abelianization(p: &FinitePresentation, t: &CosetTable) -> Abelianization {
    abelianization(&reidemeister_schreier_presentation(p, t).0)
}

/// Tietze reduction: repeatedly removes a generator occurring exactly once
/// in some relator (shortest relator first), substituting its solution into
/// the remaining relators.
pub fn tietze_simplify(p: &FinitePresentation) -> FinitePresentation {
    let mut gens: Vec<bool> = vec![true; p.ngens()];
    let mut rels: Vec<Word> = p.relators.iter().map(Word::cyclic_reduce).collect();
    loop {
        rels.retain(|r| !r.is_empty());
        rels.sort_by_key(|r| (r.len(), r.clone()));
        rels.dedup();
        let mut step = None;
        'search: for (ri, r) in rels.iter().enumerate() {
            for &(g, _) in &r.0 {
                if r.0.iter().filter(|&&(h, _)| h == g).count() == 1 {
                    step = Some((ri, g));
                    break 'search;
                }
            }
        }
        let Some((ri, g)) = step else { break };
        let r = rels.remove(ri);
        let k = r.0.iter().position(|&(h, _)| h == g).unwrap();
        // r = u g^e v = 1, so g^e = u^-1 v^-1 and g = (v u)^-e
        let u = Word(r.0[..k].to_vec());
        let v = Word(r.0[k + 1..].to_vec());
        let vu = v.concat(&u);
        let value = if r.0[k].1 > 0 { vu.inverse() } else { vu };
        rels = rels
            .iter()
            .map(|w| {
                let mut out = Vec::new();
                for &(h, e) in &w.0 {
                    if h == g {
                        let piece = if e > 0 { value.clone() } else { value.inverse() };
                        out.extend_from_slice(&piece.0);
                    } else {
                        out.push((h, e));
                    }
                }
                Word(out).cyclic_reduce()
            })
            .collect();
        gens[g] = false;
    }
    let keep: Vec<usize> = (0..p.ngens()).filter(|&g| gens[g]).collect();
    let renumber: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    FinitePresentation {
        generators: keep.iter().map(|&g| p.generators[g].clone()).collect(),
        relators: rels
            .iter()
            .map(|w| Word(w.0.iter().map(|&(g, e)| (renumber[&g], e)).collect()))
            .collect(),
    }
}

/// Sufficient test that `p` presents `Z^2`: after Tietze reduction there are
/// two generators, one relator is a commutator of them (up to cyclic
/// permutation and inversion of letters), and every other relator has zero
/// exponent sums.
pub fn presents_free_abelian_rank2(p: &FinitePresentation) -> bool {
    let q = tietze_simplify(p);
    if q.ngens() != 2 {
        return false;
    }
    let is_commutator = |r: &Word| {
        let w = r.cyclic_reduce();
        w.len() == 4
            && (0..4).all(|i| w.0[i].0 != w.0[(i + 1) % 4].0)
            && w.0[0].0 == w.0[2].0
            && w.0[0].1 == -w.0[2].1
            && w.0[1].1 == -w.0[3].1
    };
    q.relators.iter().any(is_commutator)
        && q.relators.iter().all(|r| r.exponent_sums(2) == [0, 0])
}

/// Words in the generators of `p` whose images are translations spanning
/// the lattice of `g`, found by breadth-first search over the Cayley graph
/// of the image (at most `max_elements` elements visited).
pub fn lattice_words(
    p: &FinitePresentation,
    imgs: &[AffineElement],
    g: &CrystalGroup,
    max_elements: usize,
) -> Option<Vec<Word>> {
    let target: Vec<Vec<Int>> = scaled_basis(g.lattice_basis(), g);
    let mut seen: HashSet<AffineElement> = HashSet::new();
    let mut queue: VecDeque<(AffineElement, Word)> = VecDeque::new();
    let id = AffineElement::identity();
    seen.insert(id.clone());
    queue.push_back((id, Word::empty()));
    let mut found: Vec<(Vec2, Word)> = Vec::new();
    let inverses: Vec<AffineElement> = imgs.iter().map(|x| x.inverse()).collect();
    while let Some((e, w)) = queue.pop_front() {
        for gi in 0..p.ngens() {
            for (sign, img) in [(1i8, &imgs[gi]), (-1i8, &inverses[gi])] {
                let next = e.compose(img);
                if seen.contains(&next) {
                    continue;
                }
                let nw = w.concat(&Word(vec![(gi, sign)]));
                if next.is_translation() {
                    found.push((next.translation.clone(), nw.clone()));
                    let vecs: Vec<Vec2> = found.iter().map(|(v, _)| v.clone()).collect();
                    if scaled_basis(&vecs, g) == target {
                        return Some(found.into_iter().map(|(_, w)| w).collect());
                    }
                }
                seen.insert(next.clone());
                if seen.len() > max_elements {
                    return None;
                }
                queue.push_back((next, nw));
            }
        }
    }
    None
}

/// HNF basis of the span of `vs` in lattice coordinates of `g`.
fn scaled_basis(vs: &[Vec2], g: &CrystalGroup) -> Vec<Vec<Int>> {
    let coords: Vec<Vec<Int>> = vs
        .iter()
        .map(|v| {
            let c = g.lattice_coordinates(v);
            c.iter().map(|x| x.to_integer()).collect()
        })
        .collect();
    if coords.iter().all(|v| v.iter().all(Zero::is_zero)) {
        return Vec::new();
    }
    lattice_basis(&coords, 2)
}

/// Outcome of the four-part check that a presentation with an assignment
/// is a presentation of a crystallographic group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationCheck {
    pub homomorphism: bool,
    pub generates: bool,
    pub lattice_index: Option<usize>,
    pub holonomy_order: usize,
    pub kernel_abelianization: Option<Abelianization>,
    /// Tietze reduction of the kernel presentation reaches `<a, b | [a, b]>`.
    pub kernel_is_z2: Option<bool>,
}

impl PresentationCheck {
    pub fn passed(&self) -> bool {
        self.homomorphism
            && self.generates
            && self.lattice_index == Some(self.holonomy_order)
            && self.kernel_abelianization
                == Some(Abelianization {
                    free_rank: 2,
                    torsion: Vec::new(),
                })
            && self.kernel_is_z2 == Some(true)
    }
}

pub fn check_presentation_against(
    p: &FinitePresentation,
    assign: &Assignment,
    g: &CrystalGroup,
) -> Result<PresentationCheck> {
    let imgs = images(p, assign)?;
    let homomorphism = relators_hold(p, &imgs);
    let generates = !imgs.is_empty()
        && group_from_generators(&imgs).map(|h| h == *g).unwrap_or(false);
    let mut check = PresentationCheck {
        homomorphism,
        generates,
        lattice_index: None,
        holonomy_order: g.holonomy().order(),
        kernel_abelianization: None,
        kernel_is_z2: None,
    };
    if !homomorphism || !generates {
        return Ok(check);
    }
    let words = lattice_words(p, &imgs, g, 200_000)
        .ok_or_else(|| Error::Inconsistent("no lattice words found".into()))?;
    let table = match coset_enumeration(p, &words, DEFAULT_MAX_COSETS) {
        Ok(t) => t,
        Err(Error::TableOverflow { .. }) => return Ok(check),
        Err(e) => return Err(e),
    };
    check.lattice_index = Some(table.index());
    let (kernel, _) = reidemeister_schreier_presentation(p, &table);
    check.kernel_abelianization = Some(abelianization(&kernel));
    check.kernel_is_z2 = Some(presents_free_abelian_rank2(&kernel));
    Ok(check)
}

pub fn verify_presentation_against(
    p: &FinitePresentation,
    assign: &Assignment,
    g: &CrystalGroup,
) -> Result<bool> {
    Ok(check_presentation_against(p, assign, g)?.passed())
}

/// Evaluated images of a list of words.
pub fn evaluate_words(ws: &[Word], imgs: &[AffineElement]) -> Vec<AffineElement> {
    ws.iter().map(|w| evaluate_word(w, imgs)).collect()
}

/// Distinct cosets reached, as a set, for tests of table invariants.
pub fn reachable(t: &CosetTable) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([0usize]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for &d in &t.table[c] {
            if seen.insert(d) {
                queue.push_back(d);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::{AR, NEG_I};
    use crate::linalg::rat;
    use crate::mat2::vec_from_ints;

    fn pres(s: &str) -> FinitePresentation {
        FinitePresentation::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let p = pres("<a,j | a^4 = j^2 = (aj)^4 = 1>");
        assert_eq!(p.relators.len(), 3);
        assert_eq!(p.to_string(), "<a,j | a^4, j^2, ajajajaj>");
        let w = p.word("(j*a)^2 a^-1").unwrap();
        assert_eq!(w, Word(vec![(1, 1), (0, 1), (1, 1)]));
        assert!(FinitePresentation::parse("<a | b>").is_err());
        assert!(parse_word("a^", &["a".to_string()]).is_err());
    }

    #[test]
    fn free_reduction_is_idempotent() {
        let w = Word(vec![(0, 1), (1, 1), (1, -1), (0, -1), (2, 1)]);
        let r = w.free_reduce();
        assert_eq!(r, Word(vec![(2, 1)]));
        assert_eq!(r.free_reduce(), r);
    }

    #[test]
    fn evaluation() {
        let p = pres("<d, j | (jd^2)^2, j^2>");
        let half = |a, b| [rat(a, 2), rat(b, 2)];
        let d = AffineElement::new(AR, half(1, 0));
        let j = AffineElement::new(NEG_I, half(1, 1));
        let imgs = vec![d, j];
        assert!(evaluate_word(&Word::empty(), &imgs).is_identity());
        assert_eq!(
            evaluate_word(&p.word("d^2").unwrap(), &imgs),
            AffineElement::translation(vec_from_ints(1, 0))
        );
    }

    #[test]
    fn homomorphism_check() {
        let p = pres("<j,u,v | j^2, u^2, v^2, (juv)^2>");
        let mut a = Assignment::new();
        a.insert("j".into(), AffineElement::linear(NEG_I));
        a.insert("u".into(), AffineElement::new(NEG_I, vec_from_ints(1, 0)));
        a.insert("v".into(), AffineElement::new(NEG_I, vec_from_ints(0, 1)));
        assert!(verify_homomorphism(&p, &a).unwrap());
        a.insert("u".into(), AffineElement::translation(vec_from_ints(1, 0)));
        assert!(!verify_homomorphism(&p, &a).unwrap());
        a.remove("v");
        assert_eq!(verify_homomorphism(&p, &a), Err(Error::UnboundGenerator("v".into())));
    }

    #[test]
    fn abelianizations() {
        let p1 = pres("<x,y | [x,y]>");
        assert_eq!(abelianization(&p1), Abelianization { free_rank: 2, torsion: vec![] });
        let pgg = pres("<d,j | (jd^2)^2 = j^2 = 1>");
        let ab = abelianization(&pgg);
        assert_eq!(ab, Abelianization { free_rank: 0, torsion: vec![2, 4] });
        assert_eq!(ab.to_string(), "Z/4 + Z/2");
        assert_eq!(ab.mod2_rank(), 2);
    }

    #[test]
    fn coset_examples() {
        let p1 = pres("<x,y | [x,y]>");
        let sub = vec![p1.word("x^2").unwrap(), p1.word("y").unwrap()];
        let t = coset_enumeration(&p1, &sub, 1000).unwrap();
        assert_eq!(t.index(), 2);
        assert!(t.is_valid_for(&p1));
        let dinf = pres("<u,v | u^2, v^2>");
        assert_eq!(subgroup_index(&dinf, &[dinf.word("uv").unwrap()], 1000).unwrap(), 2);
        let free = pres("<x | >");
        assert_eq!(
            coset_enumeration(&free, &[], 50),
            Err(Error::TableOverflow { max: 50 })
        );
    }

    #[test]
    fn enumeration_with_coincidences() {
        // A finite group presentation that forces coincidences: S3.
        let s3 = pres("<a,b | a^3, b^2, (ab)^2>");
        assert_eq!(subgroup_index(&s3, &[], 1000).unwrap(), 6);
        // Von Dyck group (2,3,5), order 60.
        let a5 = pres("<a,b | a^2, b^3, (ab)^5>");
        assert_eq!(subgroup_index(&a5, &[], 1000).unwrap(), 60);
        // Quaternion group with a tight limit still finishes with lookahead.
        let q8 = pres("<a,b | a^4, a^2 b^-2, b^-1 a b a>");
        assert_eq!(subgroup_index(&q8, &[], 1000).unwrap(), 8);
    }

    #[test]
    fn low_index_counts() {
        let p1 = pres("<x,y | [x,y]>");
        let t = low_index_subgroups(&p1, 2);
        assert_eq!(t.iter().filter(|t| t.index() == 2).count(), 3);
        let total = low_index_subgroups(&p1, 6).len();
        let expected: usize = (1..=6).map(|m| crate::linalg::sublattices_of_index(m).len()).sum();
        assert_eq!(total, expected);
        let pgg = pres("<d,j | (jd^2)^2 = j^2 = 1>");
        assert_eq!(low_index_subgroups(&pgg, 2).iter().filter(|t| t.index() == 2).count(), 3);
        let s3 = pres("<a,b | a^3, b^2, (ab)^2>");
        // S3: classes of subgroups of index 1, 2, 3, 6
        let idx: Vec<usize> = low_index_subgroups(&s3, 6).iter().map(|t| t.index()).collect();
        assert_eq!(idx, vec![1, 2, 3, 6]);
    }

    #[test]
    fn schreier_generators() {
        let p1 = pres("<x,y | [x,y]>");
        let t = coset_enumeration(&p1, &[Word::generator(0), Word::generator(1)], 10).unwrap();
        assert_eq!(reidemeister_schreier(&p1, &t), vec![Word::generator(0), Word::generator(1)]);
        let sub = vec![p1.word("x^2").unwrap(), p1.word("y").unwrap()];
        let t = coset_enumeration(&p1, &sub, 100).unwrap();
        let gens = reidemeister_schreier(&p1, &t);
        let imgs = vec![
            AffineElement::translation(vec_from_ints(1, 0)),
            AffineElement::translation(vec_from_ints(0, 1)),
        ];
        let vals = evaluate_words(&gens, &imgs);
        let g = group_from_generators(&vals).unwrap();
        assert_eq!(g.lattice_basis(), &[vec_from_ints(2, 0), vec_from_ints(0, 1)]);
        assert_eq!(
            subgroup_abelianization(&p1, &t),
            Abelianization { free_rank: 2, torsion: vec![] }
        );
    }

    #[test]
    fn verify_p1_and_mutated_p2() {
        let p1 = pres("<x,y | [x,y]>");
        let mut a = Assignment::new();
        a.insert("x".into(), AffineElement::translation(vec_from_ints(1, 0)));
        a.insert("y".into(), AffineElement::translation(vec_from_ints(0, 1)));
        let g = group_from_generators(&images(&p1, &a).unwrap()).unwrap();
        assert!(verify_presentation_against(&p1, &a, &g).unwrap());

        let p2 = pres("<j,u,v | j^2, u^2, v^2, (juv)^2>");
        let mut b = Assignment::new();
        b.insert("j".into(), AffineElement::linear(NEG_I));
        b.insert("u".into(), AffineElement::new(NEG_I, vec_from_ints(-1, 0)));
        b.insert("v".into(), AffineElement::new(NEG_I, vec_from_ints(0, -1)));
        let g2 = group_from_generators(&images(&p2, &b).unwrap()).unwrap();
        assert!(verify_presentation_against(&p2, &b, &g2).unwrap());
        let mutated = pres("<j,u,v | u^2, v^2, (juv)^2>");
        let check = check_presentation_against(&mutated, &b, &g2).unwrap();
        // The kernel is free of rank 2, so its abelianization alone does not
        // detect the missing relator.
        assert_eq!(check.lattice_index, Some(2));
        assert_eq!(check.kernel_is_z2, Some(false));
        assert!(!check.passed());
    }
}
