//! Endomorphisms, Whitehead automorphisms, and basis tests.

use crate::error::{Error, Result};
use crate::word::{Letter, Word};
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

/// An endomorphism of the rank-r free group, given by generator images.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EndoMap {
    rank: u16,
    images: Vec<Word>,
}

impl EndoMap {
    pub fn new(rank: u16, images: Vec<Word>) -> Result<EndoMap> {
        if images.len() != rank as usize {
            return Err(Error::ArityMismatch { expected: rank as usize, got: images.len() });
        }
        for w in &images {
            if w.max_generator() > rank {
                return Err(Error::RankExceeded { generator: w.max_generator(), rank });
            }
        }
        Ok(EndoMap { rank, images })
    }

    pub fn identity(rank: u16) -> EndoMap {
        let images = (1..=rank)
            .map(|g| Word::from_letters([Letter::new(g, true)]))
            .collect();
        EndoMap { rank, images }
    }

    pub fn rank(&self) -> u16 {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image_of(&self, gen: u16) -> &Word {
        &self.images[(gen - 1) as usize]
    }

    /// Applies the map letterwise and freely reduces.
    pub fn apply(&self, w: &Word) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(w.len() * 2);
        for &l in w.letters() {
            let img = self.image_of(l.generator());
            if l.is_positive() {
                out.extend_from_slice(img.letters());
            } else {
                out.extend(img.letters().iter().rev().map(|x| x.inverse()));
            }
        }
        Word::from_letters(out)
    }

    /// Composition `self . other`: first apply `other`, then `self`.
    pub fn compose(&self, other: &EndoMap) -> Result<EndoMap> {
        if self.rank != other.rank {
            return Err(Error::ArityMismatch {
                expected: self.rank as usize,
                got: other.rank as usize,
            });
        }
        let images = other.images.iter().map(|w| self.apply(w)).collect();
        EndoMap::new(self.rank, images)
    }

    /// Parses the semicolon-separated text form `ab;b` (rank = number of
    /// segments; an empty segment is the identity element).
    pub fn parse(s: &str) -> Result<EndoMap> {
        let images: Vec<Word> = s
            .split(';')
            .map(Word::parse)
            .collect::<Result<_>>()?;
        let rank = images.len() as u16;
        EndoMap::new(rank, images)
    }
}

impl fmt::Display for EndoMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// A Whitehead automorphism.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum WhiteheadAut {
    /// A letter permutation: generator i maps to the single letter
    /// `images[i-1]`. Valid when the images hit each generator exactly once.
    LetterMap { images: Vec<Letter> },
    /// The automorphism with multiplier `a` and letter set `set` (a bitmask
    /// over letter codes): `a` is fixed, and any other letter `x` maps to
    /// `x a`, `a^-1 x`, or `a^-1 x a` according to whether `x`, `x^-1`, or
    /// both lie in the set. Invariant: `a` is in the set, `a^-1` is not.
    Multiplier { rank: u16, a: Letter, set: u32 },
}

impl WhiteheadAut {
    pub fn rank(&self) -> u16 {
        match self {
            WhiteheadAut::LetterMap { images } => images.len() as u16,
            WhiteheadAut::Multiplier { rank, .. } => *rank,
        }
    }

    pub fn apply(&self, w: &Word) -> Word {
        match self {
            WhiteheadAut::LetterMap { images } => Word::from_letters(w.letters().iter().map(|l| {
                let img = images[(l.generator() - 1) as usize];
                if l.is_positive() {
                    img
                } else {
                    img.inverse()
                }
            })),
            WhiteheadAut::Multiplier { a, set, .. } => {
                let a = *a;
                let in_set = |l: Letter| set & (1 << l.code()) != 0;
                let mut out: Vec<Letter> = Vec::with_capacity(w.len() * 3);
                for &l in w.letters() {
                    if l.generator() == a.generator() {
                        out.push(l);
                        continue;
                    }
                    match (in_set(l), in_set(l.inverse())) {
                        (true, true) => {
                            out.push(a.inverse());
                            out.push(l);
                            out.push(a);
                        }
                        (true, false) => {
                            out.push(l);
                            out.push(a);
                        }
                        (false, true) => {
                            out.push(a.inverse());
                            out.push(l);
                        }
                        (false, false) => out.push(l),
                    }
                }
                Word::from_letters(out)
            }
        }
    }

    pub fn to_endo(&self) -> EndoMap {
        let rank = self.rank();
        let images = (1..=rank)
            .map(|g| self.apply(&Word::from_letters([Letter::new(g, true)])))
            .collect();
        EndoMap::new(rank, images).expect("whitehead automorphism is a valid endomorphism")
    }
}

/// All multiplier-type Whitehead automorphisms for rank r (2r choices of
/// multiplier times 2^(2r-2) letter sets, identities included), followed by
/// a generating set of letter permutations: each adjacent generator swap and
/// the inversion of the first generator. The order is fixed, which makes
/// every greedy consumer deterministic.
pub fn enumerate_whitehead_auts(r: u16) -> Vec<WhiteheadAut> {
    assert!((1..=8).contains(&r), "enumeration is exponential in r");
    let mut auts = Vec::new();
    let others: usize = 2 * r as usize - 2;
    for a_code in 0..2 * r {
        let a = Letter::from_code(a_code);
        // letter codes other than a, a^-1, in ascending order
        let rest: Vec<u16> = (0..2 * r).filter(|&c| c >> 1 != a_code >> 1).collect();
        for choice in 0..(1u32 << others) {
            let mut set = 1u32 << a_code;
            for (bit, &code) in rest.iter().enumerate() {
                if choice & (1 << bit) != 0 {
                    set |= 1 << code;
                }
            }
            auts.push(WhiteheadAut::Multiplier { rank: r, a, set });
        }
    }
    for i in 1..r {
        let mut images: Vec<Letter> = (1..=r).map(|g| Letter::new(g, true)).collect();
        images.swap((i - 1) as usize, i as usize);
        auts.push(WhiteheadAut::LetterMap { images });
    }
    let mut inv: Vec<Letter> = (1..=r).map(|g| Letter::new(g, true)).collect();
    inv[0] = inv[0].inverse();
    auts.push(WhiteheadAut::LetterMap { images: inv });
    auts
}

fn total_len(tuple: &[Word]) -> usize {
    tuple.iter().map(|w| w.len()).sum()
}

/// Whether the tuple is the standard basis up to permutation and inversion.
fn is_standard_shape(tuple: &[Word]) -> bool {
    let mut seen = vec![false; tuple.len()];
    for w in tuple {
        if w.len() != 1 {
            return false;
        }
        let g = w.max_generator() as usize;
        if g > tuple.len() || seen[g - 1] {
            return false;
        }
        seen[g - 1] = true;
    }
    true
}

/// One round of strict Nielsen descent: repeatedly replace some `t[i]` by a
/// strictly shorter product with another element, until stuck.
fn nielsen_descend(t: &mut Vec<Word>) {
    loop {
        let mut improved = false;
        'scan: for i in 0..t.len() {
            for j in 0..t.len() {
                if i == j {
                    continue;
                }
                let candidates = [
                    t[i].concat(&t[j]).0,
                    t[i].concat(&t[j].inverse()).0,
                    t[j].concat(&t[i]).0,
                    t[j].inverse().concat(&t[i]).0,
                ];
                for cand in candidates {
                    if cand.len() < t[i].len() {
                        t[i] = cand;
                        improved = true;
                        break 'scan;
                    }
                }
            }
        }
        if !improved {
            return;
        }
    }
}

/// Canonical key for a tuple modulo element order and inversion.
fn tuple_key(t: &[Word]) -> Vec<Word> {
    let mut key: Vec<Word> = t
        .iter()
        .map(|w| {
            let inv = w.inverse();
            if inv.letters() < w.letters() {
                inv
            } else {
                w.clone()
            }
        })
        .collect();
    key.sort_by(|a, b| a.letters().cmp(b.letters()));
    key
}

const PLATEAU_CAP: usize = 20_000;

/// Whether an r-tuple of words is a basis of the rank-r free group.
///
/// Nielsen reduction: greedy strict length descent, then a breadth-first
/// search through length-preserving Nielsen moves to escape plateaus (a
/// basis always reaches the standard one through non-increasing moves).
pub fn is_basis(tuple: &[Word], r: u16) -> Result<bool> {
    if tuple.len() != r as usize {
        return Err(Error::ArityMismatch { expected: r as usize, got: tuple.len() });
    }
    for w in tuple {
        if w.max_generator() > r {
            return Err(Error::RankExceeded { generator: w.max_generator(), rank: r });
        }
    }
    if tuple.iter().any(|w| w.is_empty()) {
        return Ok(false);
    }
    let mut start = tuple.to_vec();
    nielsen_descend(&mut start);
    if is_standard_shape(&start) {
        return Ok(true);
    }
    // plateau search at the stalled total length
    let mut seen: HashSet<Vec<Word>> = HashSet::new();
    let mut queue: VecDeque<Vec<Word>> = VecDeque::new();
    seen.insert(tuple_key(&start));
    queue.push_back(start);
    while let Some(t) = queue.pop_front() {
        let len = total_len(&t);
        for i in 0..t.len() {
            let mut moves: Vec<Word> = vec![t[i].inverse()];
            for j in 0..t.len() {
                if i == j {
                    continue;
                }
                moves.extend([
                    t[i].concat(&t[j]).0,
                    t[i].concat(&t[j].inverse()).0,
                    t[j].concat(&t[i]).0,
                    t[j].inverse().concat(&t[i]).0,
                ]);
            }
            for m in moves {
                if m.len() > t[i].len() || m.is_empty() {
                    continue;
                }
                let mut next = t.clone();
                next[i] = m;
                if total_len(&next) < len {
                    nielsen_descend(&mut next);
                }
                if is_standard_shape(&next) {
                    return Ok(true);
                }
                if seen.insert(tuple_key(&next)) {
                    if seen.len() > PLATEAU_CAP {
                        return Err(Error::CapExceeded { what: "Nielsen plateau search", cap: PLATEAU_CAP });
                    }
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(false)
}

/// Total length change of conjugating every element by the letter `p`
/// (each element `u` becomes `p^-1 u p`, freely reduced).
fn conjugation_delta(tuple: &[Word], p: Letter) -> isize {
    tuple
        .iter()
        .map(|u| {
            if u.is_empty() {
                return 0;
            }
            let mut d = 2isize;
            if u.first() == Some(p) {
                d -= 2;
            }
            if u.last() == Some(p.inverse()) {
                d -= 2;
            }
            d
        })
        .sum()
}

/// Whether no single-letter conjugation of the whole tuple shortens its
/// total length (cyclically conjugation-least).
pub fn is_cclr_basis(basis: &[Word]) -> bool {
    let max_gen = basis.iter().map(|w| w.max_generator()).max().unwrap_or(0);
    (0..2 * max_gen).all(|c| conjugation_delta(basis, Letter::from_code(c)) >= 0)
}

/// Greedily conjugates the tuple until [`is_cclr_basis`] holds. Returns the
/// conjugated tuple and the conjugator g, with `out[i] = g^-1 basis[i] g`.
pub fn make_cclr(basis: &[Word]) -> (Vec<Word>, Word) {
    let mut tuple = basis.to_vec();
    let mut g = Word::empty();
    let max_gen = tuple.iter().map(|w| w.max_generator()).max().unwrap_or(0);
    loop {
        let Some(p) = (0..2 * max_gen)
            .map(Letter::from_code)
            .find(|&p| conjugation_delta(&tuple, p) < 0)
        else {
            return (tuple, g);
        };
        let pw = Word::from_letters([p]);
        for u in &mut tuple {
            *u = pw.inverse().concat(u).0.concat(&pw).0;
        }
        g = g.concat(&pw).0;
    }
}

/// Whether no letter p has every element starting with p and ending with
/// p^-1 (no common root conjugation).
pub fn is_rcr_basis(basis: &[Word]) -> bool {
    if basis.is_empty() {
        return true;
    }
    let max_gen = basis.iter().map(|w| w.max_generator()).max().unwrap_or(0);
    !(0..2 * max_gen).map(Letter::from_code).any(|p| {
        basis
            .iter()
            .all(|u| u.first() == Some(p) && u.last() == Some(p.inverse()))
    })
}

/// Folded subgroup graph built from a set of words (Stallings folding),
/// used to read off the possible first letters of nontrivial elements.
fn subgroup_first_letters(words: &[Word]) -> HashSet<Letter> {
    // vertices are usizes; edges are (from, to, generator) meaning a
    // positively-labeled arc; base vertex is 0
    let mut edges: Vec<(usize, usize, u16)> = Vec::new();
    let mut next_vertex = 1usize;
    for w in words {
        let mut at = 0usize;
        let n = w.len();
        for (k, &l) in w.letters().iter().enumerate() {
            let to = if k + 1 == n { 0 } else { next_vertex };
            if k + 1 != n {
                next_vertex += 1;
            }
            if l.is_positive() {
                edges.push((at, to, l.generator()));
            } else {
                edges.push((to, at, l.generator()));
            }
            at = to;
        }
    }
    // union-find folding
    let mut parent: Vec<usize> = (0..next_vertex).collect();
    fn find(parent: &mut Vec<usize>, mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    loop {
        let mut merged = false;
        let mut out_seen: HashMap<(usize, u16), usize> = HashMap::new();
        let mut in_seen: HashMap<(usize, u16), usize> = HashMap::new();
        for &(u, v, g) in &edges {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if let Some(&prev) = out_seen.get(&(ru, g)) {
                let rp = find(&mut parent, prev);
                if rp != rv {
                    parent[rp.max(rv)] = rp.min(rv);
                    merged = true;
                    break;
                }
            } else {
                out_seen.insert((ru, g), rv);
            }
            if let Some(&prev) = in_seen.get(&(rv, g)) {
                let rp = find(&mut parent, prev);
                if rp != ru {
                    parent[rp.max(ru)] = rp.min(ru);
                    merged = true;
                    break;
                }
            } else {
                in_seen.insert((rv, g), ru);
            }
        }
        if !merged {
            break;
        }
    }
    let mut folded: HashSet<(usize, usize, u16)> = HashSet::new();
    for &(u, v, g) in &edges {
        folded.insert((find(&mut parent, u), find(&mut parent, v), g));
    }
    let base = find(&mut parent, 0);
    // trim hanging trees: repeatedly drop non-base vertices of degree 1
    loop {
        let mut degree: HashMap<usize, usize> = HashMap::new();
        for &(u, v, _) in &folded {
            *degree.entry(u).or_insert(0) += 1;
            *degree.entry(v).or_insert(0) += 1;
        }
        let leaves: HashSet<usize> = degree
            .iter()
            .filter(|&(&v, &d)| d == 1 && v != base)
            .map(|(&v, _)| v)
            .collect();
        if leaves.is_empty() {
            break;
        }
        folded.retain(|&(u, v, _)| !leaves.contains(&u) && !leaves.contains(&v));
    }
    let mut first = HashSet::new();
    for &(u, v, g) in &folded {
        if u == base {
            first.insert(Letter::new(g, true));
        }
        if v == base {
            first.insert(Letter::new(g, false));
        }
    }
    first
}

/// Whether some proper nonempty sub-tuple of the basis generates a subgroup
/// whose nontrivial elements start with at least two distinct letters.
/// The tuple must be a basis (of rank = its length), else `NotABasis`.
pub fn is_r1_basis(basis: &[Word]) -> Result<bool> {
    let r = basis.len() as u16;
    if !is_basis(basis, r)? {
        return Err(Error::NotABasis);
    }
    let n = basis.len();
    for mask in 1..((1usize << n) - 1) {
        let sub: Vec<Word> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| basis[i].clone())
            .collect();
        if subgroup_first_letters(&sub).len() >= 2 {
            return Ok(true);
        }
    }
    Ok(false)
}
