//! Exact Frobenius number computation.
//!
//! The Frobenius number F(a) of a primitive vector a is the largest
//! integer that is not a nonnegative integer combination of the entries;
//! by convention F(a) = -1 when every nonnegative integer is
//! representable (exactly when some entry equals 1).
//!
//! Three routes are provided:
//! - `frobenius_two`: the closed Sylvester formula for two entries,
//! - `frobenius_residue_table`: the Apery-set method, shortest paths on
//!   the residue classes modulo the smallest entry,
//! - `frobenius_naive`: a brute-force dynamic program over all integers
//!   up to a caller-supplied bound, kept as an independent oracle.
//!
//! All arithmetic is 64-bit signed with explicit overflow checks.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::error::{Error, Result};
use crate::vector::{gcd, PrimitiveVector};

/// Which algorithm produced a Frobenius value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    FormulaN2,
    ResidueTable,
    NaiveDp,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            Algorithm::FormulaN2 => "formula-n2",
            Algorithm::ResidueTable => "residue-table",
            Algorithm::NaiveDp => "naive-dp",
        };
        f.write_str(tag)
    }
}

/// A Frobenius value together with the algorithm that computed it.
///
/// `value >= -1`, and `value == -1` exactly when some entry of the input
/// is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusResult {
    pub value: i64,
    pub algorithm: Algorithm,
}

fn to_i64(v: u64) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow("entry conversion to i64"))
}

/// Sylvester's closed formula for two coprime entries:
/// F(a1, a2) = a1*a2 - a1 - a2.
///
/// Returns a domain error when gcd(a1, a2) != 1; the value is -1 when
/// either entry is 1.
pub fn frobenius_two(a1: u64, a2: u64) -> Result<i64> {
    if a1 == 0 || a2 == 0 {
        return Err(Error::Usage("entries must be positive".into()));
    }
    let g = gcd(a1, a2);
    if g != 1 {
        return Err(Error::Domain(format!(
            "not primitive: gcd({a1}, {a2}) = {g}"
        )));
    }
    let (x, y) = (to_i64(a1)?, to_i64(a2)?);
    x.checked_mul(y)
        .and_then(|p| p.checked_sub(x))
        .and_then(|p| p.checked_sub(y))
        .ok_or(Error::Overflow("frobenius_two"))
}

/// Apery-set method.
///
/// With m = min(a), the least representable integer in each residue
/// class r mod m is the single-source shortest path distance from 0 on
/// the cycle graph of residues, where each remaining entry c gives arcs
/// r -> (r + c) mod m of weight c. F(a) is the maximum of those
/// distances minus m.
///
/// Duplicate entries and entries divisible by m never change the
/// distances and are dropped before the run.
pub fn frobenius_residue_table(a: &PrimitiveVector) -> Result<FrobeniusResult> {
    let mut coins: Vec<i64> = a
        .entries()
        .iter()
        .map(|&e| to_i64(e))
        .collect::<Result<_>>()?;
    coins.sort_unstable();
    coins.dedup();

    let m = coins[0];
    if m == 1 {
        return Ok(FrobeniusResult {
            value: -1,
            algorithm: Algorithm::ResidueTable,
        });
    }
    let arcs: Vec<i64> = coins[1..].iter().copied().filter(|c| c % m != 0).collect();
    // gcd(a) = 1 guarantees the arcs generate the whole cycle group, so
    // every residue class ends up reachable.
    debug_assert!(!arcs.is_empty());

    let modulus = m as usize;
    let mut least = vec![i64::MAX; modulus];
    least[0] = 0;
    let mut heap = BinaryHeap::new();
    heap.push((Reverse(0i64), 0usize));
    while let Some((Reverse(d), r)) = heap.pop() {
        if d > least[r] {
            continue;
        }
        for &c in &arcs {
            let nd = d
                .checked_add(c)
                .ok_or(Error::Overflow("residue-table relaxation"))?;
            let nr = (nd % m) as usize;
            if nd < least[nr] {
                least[nr] = nd;
                heap.push((Reverse(nd), nr));
            }
        }
    }

    let worst = *least.iter().max().expect("modulus >= 2");
    debug_assert!(worst < i64::MAX, "unreachable residue class");
    Ok(FrobeniusResult {
        value: worst - m,
        algorithm: Algorithm::ResidueTable,
    })
}

/// Memory guard for the dynamic program (bytes of reachability table).
pub const NAIVE_BOUND_GUARD: i64 = 100_000_000;

/// Brute-force oracle: marks every integer in [0, search_bound] that is
/// a nonnegative integer combination of the entries and returns the
/// largest unmarked one, or -1 when all are marked.
///
/// `search_bound` must be at least some known upper bound on F(a); the
/// tightest closed-form bound available (see [`default_search_bound`])
/// is used to validate it.
pub fn frobenius_naive(a: &PrimitiveVector, search_bound: i64) -> Result<FrobeniusResult> {
    if search_bound < 1 {
        return Err(Error::Usage(format!(
            "search bound must be positive, got {search_bound}"
        )));
    }
    if search_bound > NAIVE_BOUND_GUARD {
        return Err(Error::Usage(format!(
            "search bound {search_bound} exceeds the guard {NAIVE_BOUND_GUARD}"
        )));
    }
    let known = default_search_bound(a)?;
    if search_bound < known {
        return Err(Error::Usage(format!(
            "search bound {search_bound} is below the known upper bound {known} for {a}"
        )));
    }

    let bound = search_bound as usize;
    let mut reachable = vec![false; bound + 1];
    reachable[0] = true;
    for &entry in a.entries() {
        if entry > bound as u64 {
            continue;
        }
        let c = entry as usize;
        for i in c..=bound {
            if reachable[i - c] {
                reachable[i] = true;
            }
        }
    }
    let value = reachable
        .iter()
        .rposition(|&r| !r)
        .map_or(-1, |i| i as i64);
    Ok(FrobeniusResult {
        value,
        algorithm: Algorithm::NaiveDp,
    })
}

/// The smallest closed-form upper bound on F(a) available for this
/// vector: the Erdos-Graham bound when its regime applies, the
/// Fukshansky-Robins bound for n >= 3 (it is not a bound at n = 2), and
/// the Sylvester value of the best coprime pair of entries (F of a
/// sub-vector is an upper bound for the whole).
///
/// The result can be -1 (an exact bound) when some entry is 1.
pub fn default_search_bound(a: &PrimitiveVector) -> Result<i64> {
    // a coprime pair always exists for n = 2, so `best` is always set
    let mut best: Option<i64> = if a.dim() >= 3 {
        Some(bounds::fukshansky_robins_bound(a)?)
    } else {
        None
    };
    if let Some(eg) = bounds::erdos_graham_bound(a)? {
        best = Some(best.map_or(eg, |b| b.min(eg)));
    }
    if let Some(pair) = best_coprime_pair_bound(a)? {
        best = Some(best.map_or(pair, |b| b.min(pair)));
    }
    Ok(best.expect("FR covers n >= 3 and the entry pair covers n = 2"))
}

fn best_coprime_pair_bound(a: &PrimitiveVector) -> Result<Option<i64>> {
    let entries = a.entries();
    let mut best: Option<i64> = None;
    for i in 0..entries.len() {
        for j in (i + 1)..entries.len() {
            if gcd(entries[i], entries[j]) == 1 {
                let f2 = frobenius_two(entries[i], entries[j])?;
                best = Some(best.map_or(f2, |b: i64| b.min(f2)));
            }
        }
    }
    Ok(best)
}

/// Exact Frobenius number: two entries go through the closed formula,
/// three or more through the residue table.
pub fn frobenius(a: &PrimitiveVector) -> Result<FrobeniusResult> {
    if a.dim() == 2 {
        let value = frobenius_two(a.entries()[0], a.entries()[1])?;
        Ok(FrobeniusResult {
            value,
            algorithm: Algorithm::FormulaN2,
        })
    } else {
        frobenius_residue_table(a)
    }
}
