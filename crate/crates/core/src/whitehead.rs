//! Whitehead minimization and orbit membership for cyclic words.
//!
//! Greedy descent through Whitehead automorphisms reaches the global minimum
//! cyclic length in the automorphism orbit (peak reduction: whenever a
//! shorter orbit element exists, some single Whitehead automorphism already
//! shortens the word). Two minimal words lie in the same orbit exactly when
//! they are connected through length-preserving Whitehead moves, so orbit
//! equality reduces to a breadth-first search at the minimal length.

use crate::aut::{enumerate_whitehead_auts, WhiteheadAut};
use crate::error::{Error, Result};
use crate::word::{CyclicWord, Word};
use std::collections::HashSet;

/// Outcome of Whitehead minimization.
#[derive(Clone, Debug)]
pub struct MinimizationResult {
    /// A minimal-length representative of the orbit of the input.
    pub minimal: CyclicWord,
    /// The automorphisms applied, in order.
    pub applied: Vec<WhiteheadAut>,
    /// Number of strict reductions performed.
    pub steps: usize,
}

fn check_rank(max_gen: u16, r: u16) -> Result<()> {
    if max_gen > r {
        return Err(Error::RankExceeded { generator: max_gen, rank: r });
    }
    Ok(())
}

fn apply_cyclic(t: &WhiteheadAut, w: &CyclicWord) -> CyclicWord {
    CyclicWord::from_word(&t.apply(&w.to_word()))
}

/// Minimizes the cyclic length of `w` over its automorphism orbit by always
/// applying the first strictly length-reducing automorphism in the fixed
/// enumeration order (deterministic).
pub fn minimize(w: &Word, r: u16) -> Result<MinimizationResult> {
    check_rank(w.max_generator(), r)?;
    let auts = enumerate_whitehead_auts(r);
    let mut cur = CyclicWord::from_word(w);
    let mut applied = Vec::new();
    'descend: loop {
        for t in &auts {
            let img = apply_cyclic(t, &cur);
            if img.len() < cur.len() {
                cur = img;
                applied.push(t.clone());
                continue 'descend;
            }
        }
        let steps = applied.len();
        return Ok(MinimizationResult { minimal: cur, applied, steps });
    }
}

/// A word is primitive (part of some basis) exactly when its minimal cyclic
/// length is 1.
pub fn is_primitive(w: &Word, r: u16) -> Result<bool> {
    Ok(minimize(w, r)?.minimal.len() == 1)
}

pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

/// All orbit elements of the same (minimal) cyclic length as `m`, found by
/// closing `m` under length-preserving Whitehead moves. `m` must be minimal.
pub fn equal_length_orbit(
    m: &CyclicWord,
    r: u16,
    cap: usize,
) -> Result<HashSet<CyclicWord>> {
    check_rank(m.max_generator(), r)?;
    let auts = enumerate_whitehead_auts(r);
    let mut seen: HashSet<CyclicWord> = HashSet::new();
    seen.insert(m.clone());
    let mut frontier = vec![m.clone()];
    while let Some(v) = frontier.pop() {
        for t in &auts {
            let img = apply_cyclic(t, &v);
            if img.len() < m.len() {
                return Err(Error::NotMinimal);
            }
            if img.len() == m.len() && !seen.contains(&img) {
                if seen.len() >= cap {
                    return Err(Error::CapExceeded { what: "equal-length orbit", cap });
                }
                seen.insert(img.clone());
                frontier.push(img);
            }
        }
    }
    Ok(seen)
}

/// Whether `u` and `v` lie in the same orbit of the automorphism group
/// (equivalently: some automorphism maps `u` to a conjugate of `v`).
pub fn same_orbit(u: &Word, v: &Word, r: u16) -> Result<bool> {
    same_orbit_with_cap(u, v, r, DEFAULT_ORBIT_CAP)
}

pub fn same_orbit_with_cap(u: &Word, v: &Word, r: u16, cap: usize) -> Result<bool> {
    let mu = minimize(u, r)?.minimal;
    let mv = minimize(v, r)?.minimal;
    if mu.len() != mv.len() {
        return Ok(false);
    }
    if mu == mv {
        return Ok(true);
    }
    Ok(equal_length_orbit(&mu, r, cap)?.contains(&mv))
}
