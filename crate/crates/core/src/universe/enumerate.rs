//! Counting and canonical enumeration of kind-objects over a finite ground.
//!
//! Order: sets by size, then colexicographically by bitmask over ground
//! positions; pairs and sequences by length, then lexicographically on ground
//! positions.

use std::collections::BTreeSet;

use super::{Atom, Hf, KindTag, UniverseError};

/// Largest ground handled by the bitmask enumerators.
pub const MAX_GROUND: usize = 127;

pub fn count_kind(kind: KindTag, k: u64, maxlen: Option<u64>) -> Result<u128, UniverseError> {
    check_maxlen(kind, maxlen)?;
    let k128 = u128::from(k);
    let over = || UniverseError::Overflow { kind, k };
    match kind {
        KindTag::FinSubsets => {
            if k >= 128 {
                return Err(over());
            }
            Ok(1u128 << k)
        }
        KindTag::OrderedPairs => k128.checked_mul(k128).ok_or_else(over),
        KindTag::UnorderedPairs => {
            if k < 2 {
                return Ok(0);
            }
            k128.checked_mul(k128 - 1).map(|x| x / 2).ok_or_else(over)
        }
        KindTag::InjSeq => {
            // sum over lengths j of k!/(k-j)!
            let mut total: u128 = 1;
            let mut term: u128 = 1;
            for j in 0..k128 {
                term = term.checked_mul(k128 - j).ok_or_else(over)?;
                total = total.checked_add(term).ok_or_else(over)?;
            }
            Ok(total)
        }
        KindTag::Seq => {
            let maxlen = maxlen.expect("checked above");
            let mut total: u128 = 0;
            let mut term: u128 = 1;
            for len in 0..=maxlen {
                if len > 0 {
                    term = term.checked_mul(k128).ok_or_else(over)?;
                }
                total = total.checked_add(term).ok_or_else(over)?;
                if k == 0 {
                    break;
                }
            }
            Ok(total)
        }
    }
}

fn check_maxlen(kind: KindTag, maxlen: Option<u64>) -> Result<(), UniverseError> {
    match (kind, maxlen) {
        (KindTag::Seq, None) => Err(UniverseError::MissingMaxlen),
        (KindTag::Seq, Some(_)) | (_, None) => Ok(()),
        (other, Some(_)) => Err(UniverseError::UnexpectedMaxlen(other)),
    }
}

/// Every `size`-subset of `0..n` as a bitmask, in increasing numeric (colex) order.
pub struct MasksOfSize {
    n: u32,
    next: Option<u128>,
}

impl MasksOfSize {
    pub fn new(n: u32, size: u32) -> Self {
        assert!(n as usize <= MAX_GROUND, "ground too large for bitmasks");
        let next = if size > n {
            None
        } else if size == 0 {
            Some(0)
        } else {
            Some(u128::MAX >> (128 - size))
        };
        MasksOfSize { n, next }
    }
}

impl Iterator for MasksOfSize {
    type Item = u128;

    fn next(&mut self) -> Option<u128> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            // Gosper's hack
            let low = cur & cur.wrapping_neg();
            let ripple = cur + low;
            let succ = (((ripple ^ cur) >> 2) / low) | ripple;
            if succ >> self.n != 0 {
                None
            } else {
                Some(succ)
            }
        };
        Some(cur)
    }
}

/// All subsets of `0..n` as bitmasks: by size, then colex.
pub struct AllMasks {
    n: u32,
    size: u32,
    inner: MasksOfSize,
}

impl AllMasks {
    pub fn new(n: u32) -> Self {
        AllMasks { n, size: 0, inner: MasksOfSize::new(n, 0) }
    }
}

impl Iterator for AllMasks {
    type Item = u128;

    fn next(&mut self) -> Option<u128> {
        loop {
            if let Some(m) = self.inner.next() {
                return Some(m);
            }
            if self.size >= self.n {
                return None;
            }
            self.size += 1;
            self.inner = MasksOfSize::new(self.n, self.size);
        }
    }
}

pub fn mask_positions(mask: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        out.push(i);
        m &= m - 1;
    }
    out
}

/// Sequences over `0..n` ordered by length, then lexicographically.
/// With `injective` set, entries are pairwise distinct.
pub struct PositionSeqs {
    n: usize,
    maxlen: usize,
    injective: bool,
    cur: Option<Vec<usize>>,
}

impl PositionSeqs {
    pub fn new(n: usize, maxlen: usize, injective: bool) -> Self {
        PositionSeqs { n, maxlen, injective, cur: Some(Vec::new()) }
    }

    fn first_of_len(&self, len: usize) -> Option<Vec<usize>> {
        if len > self.maxlen || (self.injective && len > self.n) || (len > 0 && self.n == 0) {
            return None;
        }
        Some(if self.injective { (0..len).collect() } else { vec![0; len] })
    }

    fn successor(&self, s: &[usize]) -> Option<Vec<usize>> {
        let mut s = s.to_vec();
        for i in (0..s.len()).rev() {
            let used: BTreeSet<usize> =
                if self.injective { s[..i].iter().copied().collect() } else { BTreeSet::new() };
            let bump = (s[i] + 1..self.n).find(|v| !used.contains(v));
            if let Some(v) = bump {
                s[i] = v;
                let mut taken: BTreeSet<usize> = used;
                taken.insert(v);
                let mut fill = 0usize;
                for slot in s.iter_mut().skip(i + 1) {
                    if self.injective {
                        while taken.contains(&fill) {
                            fill += 1;
                        }
                        *slot = fill;
                        taken.insert(fill);
                    } else {
                        *slot = 0;
                    }
                }
                return Some(s);
            }
        }
        None
    }
}

impl Iterator for PositionSeqs {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.cur.take()?;
        self.cur = self.successor(&cur).or_else(|| self.first_of_len(cur.len() + 1));
        Some(cur)
    }
}

/// Canonical stream of kind-objects over `ground`.
pub fn enum_kind<'a>(
    kind: KindTag,
    ground: &'a [Atom],
    maxlen: Option<u64>,
) -> Result<Box<dyn Iterator<Item = Hf> + 'a>, UniverseError> {
    check_maxlen(kind, maxlen)?;
    check_ground(ground)?;
    let n = ground.len();
    let pick = move |i: usize| Hf::Atom(ground[i].clone());
    Ok(match kind {
        KindTag::FinSubsets => Box::new(
            AllMasks::new(n as u32).map(move |m| Hf::set(mask_positions(m).into_iter().map(pick))),
        ),
        KindTag::UnorderedPairs => Box::new(
            MasksOfSize::new(n as u32, 2)
                .map(move |m| Hf::set(mask_positions(m).into_iter().map(pick))),
        ),
        KindTag::OrderedPairs => Box::new(
            (0..n).flat_map(move |i| (0..n).map(move |j| Hf::pair(pick(i), pick(j)))),
        ),
        KindTag::InjSeq => Box::new(
            PositionSeqs::new(n, n, true).map(move |s| Hf::seq(s.into_iter().map(pick))),
        ),
        KindTag::Seq => {
            let maxlen = maxlen.expect("checked above") as usize;
            Box::new(
                PositionSeqs::new(n, maxlen, false).map(move |s| Hf::seq(s.into_iter().map(pick))),
            )
        }
    })
}

pub fn check_ground(ground: &[Atom]) -> Result<(), UniverseError> {
    if ground.len() > MAX_GROUND {
        return Err(UniverseError::GroundTooLarge(ground.len()));
    }
    let mut seen = BTreeSet::new();
    for a in ground {
        if !seen.insert(a) {
            return Err(UniverseError::DuplicateGround(a.clone()));
        }
    }
    Ok(())
}

fn cantor_pair(x: u128, y: u128) -> Option<u128> {
    let s = x.checked_add(y)?;
    let tri = if s % 2 == 0 {
        (s / 2).checked_mul(s.checked_add(1)?)?
    } else {
        s.checked_mul(s.checked_add(1)? / 2)?
    };
    tri.checked_add(y)
}

fn cantor_unpair(z: u128) -> (u128, u128) {
    // largest w with w(w+1)/2 <= z
    let mut w = ((8.0 * z as f64 + 1.0).sqrt() as u128).saturating_sub(1) / 2;
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    let y = z - w * (w + 1) / 2;
    (w - y, y)
}

/// Code of a digit string in base `n`: the Cantor pair of its length and value.
pub fn digits_code(n: u64, digits: &[u64]) -> Result<u128, UniverseError> {
    let base = u128::from(n);
    let mut value: u128 = 0;
    for &d in digits {
        debug_assert!(d < n.max(1));
        value = value
            .checked_mul(base)
            .and_then(|v| v.checked_add(u128::from(d)))
            .ok_or(UniverseError::CodeOverflow)?;
    }
    cantor_pair(digits.len() as u128, value).ok_or(UniverseError::CodeOverflow)
}

/// The sorted range of a sequence together with its code.
///
/// Each entry is replaced by its position in the sorted range, the digit
/// string is read in base `|range|`, and the result is paired with the
/// length. `⟨⟩` has code 0, and the range with the code determine the sequence.
pub fn seq_code<T: Ord + Clone>(s: &[T]) -> Result<u128, UniverseError> {
    let range: Vec<T> = s.iter().cloned().collect::<BTreeSet<T>>().into_iter().collect();
    let digits: Vec<u64> = s
        .iter()
        .map(|x| range.binary_search(x).expect("entry is in its own range") as u64)
        .collect();
    digits_code(range.len() as u64, &digits)
}

/// Inverse of [`seq_code`] for a known range. `None` when the code does not
/// describe a sequence whose range is exactly `range`.
pub fn seq_decode<T: Ord + Clone>(range: &BTreeSet<T>, code: u128) -> Option<Vec<T>> {
    let (len, mut value) = cantor_unpair(code);
    let len = usize::try_from(len).ok()?;
    let n = range.len() as u128;
    if n == 0 {
        return (len == 0 && value == 0).then(Vec::new);
    }
    if len > 4096 {
        return None;
    }
    let items: Vec<&T> = range.iter().collect();
    let mut digits = vec![0usize; len];
    for slot in digits.iter_mut().rev() {
        *slot = (value % n) as usize;
        value /= n;
    }
    if value != 0 {
        return None;
    }
    let out: Vec<T> = digits.iter().map(|&d| items[d].clone()).collect();
    let covered: BTreeSet<usize> = digits.into_iter().collect();
    (covered.len() == range.len()).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ground(n: u64) -> Vec<Atom> {
        (0..n).map(Atom::base).collect()
    }

    #[test]
    fn anchors() {
        assert_eq!(count_kind(KindTag::FinSubsets, 5, None).unwrap(), 32);
        assert_eq!(count_kind(KindTag::UnorderedPairs, 0, None).unwrap(), 0);
        assert_eq!(count_kind(KindTag::InjSeq, 5, None).unwrap(), 326);
        assert_eq!(count_kind(KindTag::OrderedPairs, 5, None).unwrap(), 25);
        assert_eq!(count_kind(KindTag::Seq, 2, Some(3)).unwrap(), 15);
        assert_eq!(count_kind(KindTag::Seq, 0, Some(3)).unwrap(), 1);
    }

    #[test]
    fn maxlen_rules() {
        assert_eq!(count_kind(KindTag::Seq, 3, None), Err(UniverseError::MissingMaxlen));
        assert!(count_kind(KindTag::FinSubsets, 3, Some(2)).is_err());
    }

    #[test]
    fn small_orders() {
        let g = ground(3);
        let two: Vec<Hf> = enum_kind(KindTag::FinSubsets, &g[..2], None).unwrap().collect();
        let (a, b) = (Hf::Atom(g[0].clone()), Hf::Atom(g[1].clone()));
        assert_eq!(
            two,
            vec![Hf::empty(), Hf::set([a.clone()]), Hf::set([b.clone()]), Hf::set([a.clone(), b.clone()])]
        );
        let iseq: Vec<Hf> = enum_kind(KindTag::InjSeq, &g[..2], None).unwrap().collect();
        assert_eq!(
            iseq,
            vec![
                Hf::seq([]),
                Hf::seq([a.clone()]),
                Hf::seq([b.clone()]),
                Hf::seq([a.clone(), b.clone()]),
                Hf::seq([b, a]),
            ]
        );
        let pairs: Vec<Hf> = enum_kind(KindTag::UnorderedPairs, &g, None).unwrap().collect();
        let c = |i: usize| Hf::Atom(g[i].clone());
        assert_eq!(
            pairs,
            vec![Hf::set([c(0), c(1)]), Hf::set([c(0), c(2)]), Hf::set([c(1), c(2)])]
        );
    }

    #[test]
    fn duplicate_ground_rejected() {
        let g = vec![Atom::base(1), Atom::base(1)];
        assert!(matches!(
            enum_kind(KindTag::FinSubsets, &g, None),
            Err(UniverseError::DuplicateGround(_))
        ));
    }

    #[test]
    fn empty_sequence_code() {
        assert_eq!(seq_code::<u8>(&[]).unwrap(), 0);
    }

    #[test]
    fn cantor_round_trip() {
        for x in 0..40u128 {
            for y in 0..40u128 {
                assert_eq!(cantor_unpair(cantor_pair(x, y).unwrap()), (x, y));
            }
        }
    }
}
