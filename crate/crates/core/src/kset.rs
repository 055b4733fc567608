//! Zero continued fractions `K_m` and the admissible subset `K(Y)`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lattice::{chain_string, CoeffChain, Int};

/// An admissible chain `(k_2, ..., k_{e-1})` with its sequence `q_1..q_e`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KChain {
    pub k: Vec<Int>,
    pub q_seq: Vec<Int>,
}

impl KChain {
    /// Builds the chain if `k` is a zero chain with positive interior `q_i`.
    pub fn new(k: Vec<Int>) -> Option<Self> {
        is_zero_chain(&k).then(|| KChain {
            q_seq: q_sequence(&k),
            k,
        })
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    /// `q_i` with the one-based indexing of the recursion.
    pub fn q(&self, i: usize) -> &Int {
        &self.q_seq[i - 1]
    }

    /// `k_i` for `2 <= i <= e-1`.
    pub fn k_at(&self, i: usize) -> &Int {
        &self.k[i - 2]
    }

    /// `(1, 2, ..., 2, 1)`.
    pub fn is_rdp(&self) -> bool {
        self.k == rdp_chain(self.k.len())
    }

    /// Number of indices `2 < i < e-1` with `q_i = 1`.
    pub fn unit_q_count(&self) -> usize {
        let e = self.q_seq.len();
        (3..e.saturating_sub(1)).filter(|&i| self.q(i).is_one()).count()
    }

    pub fn reversed(&self) -> Self {
        let mut k = self.k.clone();
        k.reverse();
        KChain::new(k).expect("reversal of a zero chain is a zero chain")
    }
}

impl fmt::Display for KChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&chain_string(&self.k))
    }
}

/// `q_1 = 0`, `q_2 = 1`, `q_{i+1} = k_i q_i - q_{i-1}`; no filtering.
pub fn q_sequence(k: &[Int]) -> Vec<Int> {
    let mut q = Vec::with_capacity(k.len() + 2);
    q.push(Int::zero());
    q.push(Int::one());
    for ki in k {
        let len = q.len();
        let next = ki * &q[len - 1] - &q[len - 2];
        q.push(next);
    }
    q
}

/// True iff the interior `q_i` are positive and `q_e = 0`.
pub fn is_zero_chain(k: &[Int]) -> bool {
    if k.is_empty() || k.iter().any(|c| c < &Int::one()) {
        return false;
    }
    let q = q_sequence(k);
    let (last, interior) = q[1..].split_last().expect("q has at least three entries");
    last.is_zero() && interior.iter().all(Signed::is_positive)
}

/// `(1, 2, ..., 2, 1)` of length `m >= 2`.
pub fn rdp_chain(m: usize) -> Vec<Int> {
    (0..m)
        .map(|i| if i == 0 || i + 1 == m { Int::one() } else { Int::from(2) })
        .collect()
}

/// All zero chains of length `m`, lexicographically sorted.
///
/// Entries of a zero chain of length `m` are at most `m - 1` (they count the
/// triangles at each vertex of a triangulated `(m+1)`-gon), which bounds the
/// search. Length one yields nothing.
pub fn enumerate_k(m: usize) -> Vec<KChain> {
    if m < 2 {
        return Vec::new();
    }
    let caps = vec![Int::from(m - 1); m];
    search(&caps)
}

/// The chains of `K(Y)` for the a-chain `a`: zero chains with `k_i <= a_i`.
pub fn enumerate_ky(a: &CoeffChain) -> Vec<KChain> {
    search(a.coeffs())
}

/// Depth-first search over `1 <= k_i <= caps[i]`, pruned by `q`-positivity
/// and by [`min_steps_to_zero`]. The last coefficient is solved for exactly.
fn search(caps: &[Int]) -> Vec<KChain> {
    let m = caps.len();
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    let mut k = Vec::with_capacity(m);
    let mut q = vec![Int::zero(), Int::one()];
    dfs(caps, &mut k, &mut q, &mut out);
    out
}

/// Fewest coefficients that can take the state `(q_prev, q_cur)` to `q = 0`
/// with positive intermediate values, capped at `limit + 1`.
///
/// This is the length of the ceiling-division expansion of `q_prev/q_cur`:
/// any other expansion with entries `>= 1` and positive tails contracts to it
/// by repeatedly replacing `[.., a, 1, b, ..]` with `[.., a-1, b-1, ..]`.
pub fn min_steps_to_zero(q_prev: &Int, q_cur: &Int, limit: usize) -> usize {
    let (mut a, mut b) = (q_prev.clone(), q_cur.clone());
    let mut steps = 0;
    loop {
        steps += 1;
        let r = a.mod_floor(&b);
        if r.is_zero() || steps > limit {
            return steps;
        }
        let next = &b - r;
        a = std::mem::replace(&mut b, next);
    }
}

fn dfs(caps: &[Int], k: &mut Vec<Int>, q: &mut Vec<Int>, out: &mut Vec<KChain>) {
    let j = k.len();
    let q_prev = q[q.len() - 2].clone();
    let q_cur = q[q.len() - 1].clone();
    let remaining = caps.len() - j;
    if min_steps_to_zero(&q_prev, &q_cur, remaining) > remaining {
        return;
    }
    if j + 1 == caps.len() {
        // q_e = k q_cur - q_prev = 0.
        let (last, rem) = q_prev.div_rem(&q_cur);
        if rem.is_zero() && last >= Int::one() && last <= caps[j] {
            k.push(last);
            q.push(Int::zero());
            out.push(KChain {
                k: k.clone(),
                q_seq: q.clone(),
            });
            k.pop();
            q.pop();
        }
        return;
    }
    // Smallest k with k q_cur - q_prev > 0.
    let mut c = q_prev.div_floor(&q_cur) + 1;
    if c < Int::one() {
        c = Int::one();
    }
    while c <= caps[j] {
        let next = &c * &q_cur - &q_prev;
        k.push(c.clone());
        q.push(next);
        dfs(caps, k, q, out);
        k.pop();
        q.pop();
        c += 1;
    }
}
