//! Deciding whether a rank-2 word blocks primitivity.
//!
//! A word u is primitivity-blocking (pb) when no cyclically reduced
//! primitive word contains u as a subword of its cyclic form. In rank 2 the
//! cyclically reduced primitives are classified: besides single letters,
//! each one uses only one sign of each generator, one generator appears only
//! in runs of length 1, and the other in runs of two adjacent lengths
//! {t, t+1} whose arrangement is balanced. This yields a linear-time
//! decision by descent:
//!
//! 1. Words with at most one letter, or one generator, always embed.
//! 2. A word mixing signs of either generator never embeds.
//! 3. A word containing both a doubled `a` and a doubled `b` never embeds.
//! 4. Otherwise normalize so all letters are positive and `a` is the
//!    isolated generator, and read off the b-run lengths: a leading partial
//!    run k0, interior full runs m_1..m_{p-1}, and a trailing partial run
//!    k1. Interior runs must fit in {t, t+1} and partial runs must not
//!    exceed t+1, which pins t down (up to one free choice when the
//!    interior is constant). The remaining question, whether the run
//!    sequence itself is balanced, is the same question one level down:
//!    recurse on the derived word whose letters are the forced run values.
//!
//! The derived word is strictly shorter, so the descent terminates. Every
//! non-embedding verdict is certified by a structural obstruction and every
//! embedding verdict by an explicit balanced host; the test suite
//! cross-checks both against exhaustive orbit enumeration.

use crate::aut::EndoMap;
use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// Leading partial b-run, interior full b-runs, trailing partial b-run of a
/// positive word with isolated a's (runs are the b-blocks around p a's).
struct RunForm {
    k0: usize,
    interior: Vec<usize>,
    k1: usize,
    p: usize,
}

fn run_form(letters: &[Letter]) -> RunForm {
    let a = Letter::new(1, true);
    let mut runs: Vec<usize> = vec![0];
    let mut p = 0usize;
    for &l in letters {
        if l == a {
            p += 1;
            runs.push(0);
        } else {
            *runs.last_mut().unwrap() += 1;
        }
    }
    let k0 = runs[0];
    let k1 = *runs.last().unwrap();
    let interior = if p >= 1 { runs[1..p].to_vec() } else { Vec::new() };
    RunForm { k0, interior, k1, p }
}

fn decide(letters: &[Letter], trace: &mut Vec<String>) -> bool {
    if letters.len() <= 1 {
        trace.push("at most one letter: always embeds".into());
        return false;
    }
    let mut pos = [false; 2];
    let mut neg = [false; 2];
    for l in letters {
        if l.is_positive() {
            pos[(l.generator() - 1) as usize] = true;
        } else {
            neg[(l.generator() - 1) as usize] = true;
        }
    }
    if !(pos[0] || neg[0]) || !(pos[1] || neg[1]) {
        trace.push("single generator: embeds in a primitive with one extra letter".into());
        return false;
    }
    if (pos[0] && neg[0]) || (pos[1] && neg[1]) {
        trace.push("a generator occurs with both signs: primitives use uniform signs".into());
        return true;
    }
    // flip signs generator-wise to make the word positive
    let mut w: Vec<Letter> = letters
        .iter()
        .map(|l| Letter::new(l.generator(), true))
        .collect();
    let doubled = |w: &[Letter], g: u16| {
        w.windows(2)
            .any(|p| p[0].generator() == g && p[1].generator() == g)
    };
    let aa = doubled(&w, 1);
    let bb = doubled(&w, 2);
    if aa && bb {
        trace.push("doubled runs of both generators: primitives keep one generator isolated".into());
        return true;
    }
    if aa {
        trace.push("swapping generators so the isolated one is first".into());
        for l in w.iter_mut() {
            *l = Letter::new(3 - l.generator(), true);
        }
    }
    let form = run_form(&w);
    if form.p == 1 {
        trace.push("single isolated letter: embeds next to a long run".into());
        return false;
    }
    let e_min = *form.interior.iter().min().unwrap();
    let e_max = *form.interior.iter().max().unwrap();
    if e_max - e_min >= 2 {
        trace.push(format!(
            "interior runs spread from {e_min} to {e_max}: hosts carry only two adjacent run lengths"
        ));
        return true;
    }
    // the host run parameter t: interior runs lie in {t, t+1}
    let t = if e_max > e_min {
        e_min
    } else {
        // constant interior: runs of length e fit as the short runs of a
        // t = e host, or as the long runs of a t = e-1 host; the latter
        // embeds immediately when both partial runs also fit
        if form.k0 <= e_min && form.k1 <= e_min {
            trace.push(format!(
                "constant interior {e_min} with ends within {e_min}: embeds among uniform runs"
            ));
            return false;
        }
        e_min
    };
    if form.k0 > t + 1 || form.k1 > t + 1 {
        trace.push(format!(
            "a partial end run exceeds {}: no host run is long enough",
            t + 1
        ));
        return true;
    }
    // derived word over run letters: short run t -> a, long run t+1 -> b;
    // a partial end run of length t+1 pins its host run to the long value
    let short = Letter::new(1, true);
    let long = Letter::new(2, true);
    let mut derived: Vec<Letter> = Vec::with_capacity(form.p + 1);
    if form.k0 == t + 1 {
        derived.push(long);
    }
    for &m in &form.interior {
        derived.push(if m == t { short } else { long });
    }
    if form.k1 == t + 1 {
        derived.push(long);
    }
    trace.push(format!(
        "run parameter {t}: recursing on the derived run word {}",
        Word::from_letters(derived.clone())
    ));
    decide(&derived, trace)
}

/// Whether `u` is primitivity-blocking in rank 2: no primitive word contains
/// `u` in its cyclic form.
pub fn is_pb_f2(u: &Word) -> Result<bool> {
    Ok(is_pb_f2_traced(u)?.0)
}

/// Same as [`is_pb_f2`], also returning the decision steps taken.
pub fn is_pb_f2_traced(u: &Word) -> Result<(bool, Vec<String>)> {
    if u.max_generator() > 2 {
        return Err(Error::RankExceeded { generator: u.max_generator(), rank: 2 });
    }
    let mut trace = Vec::new();
    let verdict = decide(u.letters(), &mut trace);
    Ok((verdict, trace))
}

/// The automorphism a -> a b^-t, b -> b used by the run-shortening descent.
pub fn shrink_map(t: usize) -> EndoMap {
    let mut img_a = vec![Letter::new(1, true)];
    img_a.extend(std::iter::repeat(Letter::new(2, false)).take(t));
    EndoMap::new(
        2,
        vec![
            Word::from_letters(img_a),
            Word::from_letters([Letter::new(2, true)]),
        ],
    )
    .expect("valid rank-2 endomorphism")
}

/// Normalizes the leading end of a positive run-form word so it starts with
/// `a`: a leading partial b-run shorter than the maximal host run t+1 is
/// dropped; one of exactly t+1 is completed to a full interior run by
/// prepending `a`. The remainder of the word is untouched.
pub fn throwaway_normalize(u: &Word) -> Result<Word> {
    let letters = u.letters();
    if letters.iter().any(|l| !l.is_positive()) || u.max_generator() > 2 {
        return Err(Error::Invalid("expected a positive rank-2 word".into()));
    }
    if letters
        .windows(2)
        .any(|p| p[0].generator() == 1 && p[1].generator() == 1)
    {
        return Err(Error::Invalid("expected isolated occurrences of the first generator".into()));
    }
    let form = run_form(letters);
    let t = if form.interior.is_empty() {
        form.k0.max(form.k1).max(1) - 1
    } else {
        *form.interior.iter().min().unwrap()
    };
    let q = t + 1;
    if form.k0 > q {
        return Err(Error::Invalid(format!(
            "leading run {} exceeds the maximal host run {q}",
            form.k0
        )));
    }
    if form.k0 == q {
        let mut out = vec![Letter::new(1, true)];
        out.extend_from_slice(letters);
        Ok(Word::from_letters(out))
    } else {
        Ok(Word::from_letters(letters[form.k0..].to_vec()))
    }
}

/// Whether `u = a b^{m_1} ... a b^{m_p}` embeds into the primitive-shaped
/// word `v = (b^{r_1} a b^{n_1} ... a b^{n_q} a b^{r_2})^e` by the run
/// criterion: all of {m_i}, {n_j}, and r_1 + r_2 must fit in {t, t+1} for a
/// common t. Both words are taken literally (no conjugation or rotation is
/// searched).
pub fn is_cohen_form(u: &Word, v: &Word) -> bool {
    fn positive_rank2(w: &Word) -> bool {
        w.max_generator() <= 2 && w.letters().iter().all(|l| l.is_positive())
    }
    // u: positive, starts with a, a's isolated... runs m_i >= 0 are free
    if u.is_empty() || !positive_rank2(u) || u.first() != Some(Letter::new(1, true)) {
        return false;
    }
    let fu = run_form(u.letters());
    debug_assert_eq!(fu.k0, 0);
    let mut values: Vec<usize> = fu.interior.clone();
    values.push(fu.k1); // m_p is the trailing run of u
    // v (or its inverse) must be positive with at least one a
    let vv = if positive_rank2(v) {
        v.clone()
    } else {
        let inv = v.inverse();
        if !positive_rank2(&inv) {
            return false;
        }
        inv
    };
    let fv = run_form(vv.letters());
    if fv.p == 0 {
        return false;
    }
    values.extend(fv.interior.iter().copied());
    values.push(fv.k0 + fv.k1); // r_1 + r_2: the run wrapping around the ends
    let lo = *values.iter().min().unwrap();
    let hi = *values.iter().max().unwrap();
    hi - lo <= 1
}
