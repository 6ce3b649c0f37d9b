//! Constructions of primitivity-blocking and orbit-blocking words.
//!
//! An orbit-blocking word for a target w is one that appears in the cyclic
//! reduction of no automorphic image of w. The engine behind every
//! construction here is a counting argument: an image of w spells, around
//! its cyclic form, at most ℓ = |cyclic reduction of w| junctions between
//! images of single letters, each image being primitive; a
//! primitivity-blocking word can never sit inside a primitive word, so each
//! disjoint occurrence must straddle its own junction. A product of ℓ+1
//! primitivity-blocking words with no cancellation anywhere (including the
//! wraparound) therefore cannot occur at all, and for slender targets the
//! junction count drops from ℓ to the chunk count k = ⌈ℓ/(2r−1)⌉.

use crate::error::{Error, Result};
use crate::whitehead::is_primitive;
use crate::word::{slender_decompose, Letter, Word};

/// A certified orbit blocker: `bound` is the maximal number of disjoint
/// blocking-unit occurrences any target-orbit element can carry (ℓ or k),
/// `sequence` holds the bound+1 primitivity-blocking units, and `product`
/// is their cancellation-free concatenation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockerSpec {
    rank: u16,
    bound: usize,
    sequence: Vec<Word>,
    product: Word,
}

impl BlockerSpec {
    /// Validates the unit count and the cancellation-free invariant,
    /// including the wraparound junction, then concatenates.
    pub fn new(rank: u16, bound: usize, sequence: Vec<Word>) -> Result<BlockerSpec> {
        if sequence.len() != bound + 1 {
            return Err(Error::ArityMismatch { expected: bound + 1, got: sequence.len() });
        }
        if sequence.iter().any(|v| v.is_empty()) {
            return Err(Error::EmptyWord);
        }
        for i in 0..sequence.len() {
            let next = &sequence[(i + 1) % sequence.len()];
            let (_, cancelled) = sequence[i].concat(next);
            if cancelled > 0 {
                return Err(Error::Invalid(format!(
                    "cancellation between adjacent blocking units {} and {}",
                    sequence[i], next
                )));
            }
        }
        let mut product = Word::empty();
        for v in &sequence {
            product = product.concat(v).0;
        }
        debug_assert_eq!(product.len(), sequence.iter().map(Word::len).sum::<usize>());
        Ok(BlockerSpec { rank, bound, sequence, product })
    }

    pub fn rank(&self) -> u16 {
        self.rank
    }

    /// Maximal disjoint occurrence count for orbit elements of the target.
    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn sequence(&self) -> &[Word] {
        &self.sequence
    }

    pub fn product(&self) -> &Word {
        &self.product
    }
}

/// The shortest primitivity-blocking word of the given rank: x₁⁻¹x₂x₁ at
/// rank 2 and x₁x₂…x_{r−1}x_r²x_{r−1}…x₂x₁⁻¹ (length 2r) for r ≥ 3.
pub fn shortest_pb_word(r: u16) -> Result<Word> {
    if r < 2 {
        return Err(Error::Invalid("blocking constructions need rank at least 2".into()));
    }
    if r == 2 {
        return Word::parse("Aba");
    }
    // ascend x₁..x_r, then descend x_r..x₂, and close with x₁⁻¹
    let mut letters = Vec::with_capacity(2 * r as usize);
    letters.extend((1..=r).map(|g| Letter::new(g, true)));
    letters.extend((2..=r).rev().map(|g| Letter::new(g, true)));
    letters.push(Letter::new(1, false));
    let w = Word::from_letters(letters);
    debug_assert_eq!(w.len(), 2 * r as usize);
    Ok(w)
}

/// The blocking word x₁²x₂²…x_r²x₁ (length 2r+1). It ends and begins with
/// x₁, so it concatenates with itself without cancellation.
pub fn pb_word_square_form(r: u16) -> Result<Word> {
    if r < 2 {
        return Err(Error::Invalid("blocking constructions need rank at least 2".into()));
    }
    let mut letters = Vec::with_capacity(2 * r as usize + 1);
    for g in 1..=r {
        letters.push(Letter::new(g, true));
        letters.push(Letter::new(g, true));
    }
    letters.push(Letter::new(1, true));
    Ok(Word::from_letters(letters))
}

/// The two length-2r blocking words that alternate without cancellation:
/// the even unit x₁x₂…x_r²…x₂x₁⁻¹ and the odd unit x₁⁻¹x₂…x_r²…x₂x₁.
pub fn alternating_pb_pair(r: u16) -> Result<(Word, Word)> {
    if r < 3 {
        return Err(Error::SlenderRank);
    }
    let even = shortest_pb_word(r)?;
    let mut odd: Vec<Letter> = even.letters().to_vec();
    let end = odd.len() - 1;
    odd[0] = odd[0].inverse();
    odd[end] = odd[end].inverse();
    Ok((even, Word::from_letters(odd)))
}

/// The odd-count closer: the even alternating unit with x₁ and x₂ swapped.
/// It starts with x₂ and ends with x₂⁻¹, so it follows an even unit and
/// wraps around to an odd unit without cancellation.
fn swapped_closer(r: u16) -> Result<Word> {
    let even = shortest_pb_word(r)?;
    Ok(Word::from_letters(even.letters().iter().map(|l| {
        match l.generator() {
            1 => Letter::new(2, l.is_positive()),
            2 => Letter::new(1, l.is_positive()),
            _ => *l,
        }
    })))
}

/// A sequence of `count` primitivity-blocking words whose concatenation is
/// reduced and cyclically reduced (no cancellation at any junction,
/// including last-to-first). Rank 2 repeats the square form; higher ranks
/// alternate the odd/even pair, swapping generators in the final unit when
/// `count` is odd so the wraparound junction also survives.
pub fn noncancelling_pb_sequence(r: u16, count: usize) -> Result<Vec<Word>> {
    if count == 0 {
        return Err(Error::Invalid("need at least one blocking unit".into()));
    }
    let seq: Vec<Word> = if r == 2 {
        vec![pb_word_square_form(2)?; count]
    } else if count == 1 {
        vec![pb_word_square_form(r)?]
    } else {
        let (even, odd) = alternating_pb_pair(r)?;
        let mut seq: Vec<Word> = (1..=count)
            .map(|i| if i % 2 == 1 { odd.clone() } else { even.clone() })
            .collect();
        if count % 2 == 1 {
            seq[count - 1] = swapped_closer(r)?;
        }
        seq
    };
    for i in 0..seq.len() {
        let (_, cancelled) = seq[i].concat(&seq[(i + 1) % seq.len()]);
        if cancelled > 0 {
            return Err(Error::Invalid("blocking sequence cancels at a junction".into()));
        }
    }
    Ok(seq)
}

/// An orbit-blocking word for `w`: ℓ+1 non-cancelling blocking units where
/// ℓ is the length of the cyclic reduction of `w`. Length (2r+1)(ℓ+1) at
/// rank 2 and 2r(ℓ+1) for r ≥ 3.
pub fn orbit_blocker(w: &Word, r: u16) -> Result<BlockerSpec> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if w.max_generator() > r {
        return Err(Error::RankExceeded { generator: w.max_generator(), rank: r });
    }
    let ell = w.cyclic_reduce().0.len();
    BlockerSpec::new(r, ell, noncancelling_pb_sequence(r, ell + 1)?)
}

/// The shorter orbit blocker for ranks ≥ 3: the cyclic reduction of `w`
/// splits into k = ⌈ℓ/(2r−1)⌉ slender chunks, each of which maps into a
/// primitive word under any automorphism, so k+1 units suffice. Length
/// 2r(⌈ℓ/(2r−1)⌉+1).
pub fn orbit_blocker_slender(w: &Word, r: u16) -> Result<BlockerSpec> {
    if r < 3 {
        return Err(Error::SlenderRank);
    }
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if w.max_generator() > r {
        return Err(Error::RankExceeded { generator: w.max_generator(), rank: r });
    }
    let core = w.cyclic_reduce().0;
    let k = slender_decompose(&core, r).len();
    BlockerSpec::new(r, k, noncancelling_pb_sequence(r, k + 1)?)
}

/// The least m ≥ 0 such that u(m) = wᵐ·v·w⁻ᵐ, freely reduced, starts with
/// the first letter of w and ends with its inverse. Exists whenever w and v
/// do not commute; the cap |v| + 2|w| + 4 is a safety net that the
/// existence argument keeps unreachable.
pub fn encapsulation_exponent(w: &Word, v: &Word) -> Result<usize> {
    if w.is_empty() || v.is_empty() {
        return Err(Error::EmptyWord);
    }
    if w.concat(v).0 == v.concat(w).0 {
        return Err(Error::CommutingInputs);
    }
    let head = w.first().expect("nonempty");
    let tail = head.inverse();
    let cap = v.len() + 2 * w.len() + 4;
    let winv = w.inverse();
    let mut u = v.clone();
    for m in 0..=cap {
        if u.first() == Some(head) && u.last() == Some(tail) {
            return Ok(m);
        }
        u = w.concat(&u).0.concat(&winv).0;
    }
    Err(Error::CapExceeded { what: "encapsulation exponent", cap })
}

/// A cyclically reduced primitive word containing w_X·w_Y, where w_X and
/// w_Y are nontrivial words over disjoint generator sets X and Y covering
/// all of 1..=r and |Y| ≥ 2: the witness is w_Y⁻¹·w_X·w_Y·y with y the
/// smallest-index generator of Y whose index differs from the last letter
/// of w_Y (so neither junction around y cancels).
pub fn split_word_witness(
    w_x: &Word,
    w_y: &Word,
    x_set: &[u16],
    y_set: &[u16],
    r: u16,
) -> Result<Word> {
    if x_set.is_empty() || y_set.is_empty() {
        return Err(Error::Invalid("generator sets must be nonempty".into()));
    }
    if y_set.len() < 2 {
        return Err(Error::Invalid("the second generator set needs at least two members".into()));
    }
    let mut seen = vec![false; r as usize + 1];
    for &g in x_set.iter().chain(y_set) {
        if g == 0 || g > r {
            return Err(Error::RankExceeded { generator: g, rank: r });
        }
        if seen[g as usize] {
            return Err(Error::Invalid(format!("generator x{g} appears in both sets")));
        }
        seen[g as usize] = true;
    }
    if !seen[1..].iter().all(|&s| s) {
        return Err(Error::Invalid("generator sets must cover the whole rank".into()));
    }
    if w_x.is_empty() || w_y.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !w_x.letters().iter().all(|l| x_set.contains(&l.generator())) {
        return Err(Error::Invalid("first word strays outside its generator set".into()));
    }
    if !w_y.letters().iter().all(|l| y_set.contains(&l.generator())) {
        return Err(Error::Invalid("second word strays outside its generator set".into()));
    }
    let last = w_y.last().expect("nonempty").generator();
    let y_gen = y_set
        .iter()
        .copied()
        .filter(|&g| g != last)
        .min()
        .expect("|Y| >= 2 leaves a choice");
    let y = Word::from_letters([Letter::new(y_gen, true)]);
    let v = w_y.inverse().concat(w_x).0.concat(w_y).0.concat(&y).0;
    debug_assert!(v.is_cyclically_reduced());
    if !is_primitive(&v, r)? {
        return Err(Error::Invalid(format!("witness {v} failed its primitivity certificate")));
    }
    Ok(v)
}
