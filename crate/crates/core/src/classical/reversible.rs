use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::simulator::SeededRng;

/// Widest permutation stored as an explicit table.
pub const MAX_BITS: usize = 12;

/// A reversible gate on `n` bits, stored as the image of every input.
/// Bit `q` of an index is bit `q` of the register.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReversibleGate {
    n: usize,
    perm: Vec<usize>,
}

fn check_width(n: usize) -> Result<()> {
    if n > MAX_BITS {
        return Err(Error::Capacity {
            requested: n,
            max: MAX_BITS,
        });
    }
    Ok(())
}

impl ReversibleGate {
    pub fn from_table(n: usize, perm: Vec<usize>) -> Result<Self> {
        check_width(n)?;
        let size = 1usize << n;
        if perm.len() != size {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: perm.len(),
            });
        }
        let mut seen = vec![false; size];
        for &p in &perm {
            if p >= size || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument(format!(
                    "table is not a permutation of 0..{size}"
                )));
            }
        }
        Ok(Self { n, perm })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        check_width(n)?;
        Self::from_table(n, (0..1usize << n).map(f).collect())
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |x| x)
    }

    /// NOT on every bit set in `mask`.
    pub fn xor_const(n: usize, mask: usize) -> Result<Self> {
        if mask >> n != 0 {
            return Err(Error::InvalidArgument(format!(
                "mask {mask:#b} wider than {n} bits"
            )));
        }
        Self::from_fn(n, |x| x ^ mask)
    }

    pub fn not(n: usize, bit: usize) -> Result<Self> {
        check_bits(n, &[bit])?;
        Self::xor_const(n, 1 << bit)
    }

    pub fn cnot(n: usize, control: usize, target: usize) -> Result<Self> {
        check_bits(n, &[control, target])?;
        Self::from_fn(n, |x| x ^ (((x >> control) & 1) << target))
    }

    pub fn toffoli(n: usize, c1: usize, c2: usize, target: usize) -> Result<Self> {
        check_bits(n, &[c1, c2, target])?;
        Self::from_fn(n, |x| x ^ ((((x >> c1) & (x >> c2)) & 1) << target))
    }

    pub fn swap(n: usize, a: usize, b: usize) -> Result<Self> {
        check_bits(n, &[a, b])?;
        Self::from_fn(n, |x| swap_bits(x, a, b))
    }

    pub fn fredkin(n: usize, control: usize, a: usize, b: usize) -> Result<Self> {
        check_bits(n, &[control, a, b])?;
        Self::from_fn(n, |x| {
            if (x >> control) & 1 == 1 {
                swap_bits(x, a, b)
            } else {
                x
            }
        })
    }

    /// `g` applied to the bits other than `control` whenever `control` is set.
    /// `g` acts on the remaining bits in ascending order.
    pub fn controlled(g: &ReversibleGate, control: usize) -> Result<Self> {
        let n = g.n + 1;
        check_bits(n, &[control])?;
        let low_mask = (1usize << control) - 1;
        Self::from_fn(n, |x| {
            if (x >> control) & 1 == 0 {
                return x;
            }
            let rest = (x & low_mask) | ((x >> (control + 1)) << control);
            let out = g.perm[rest];
            (out & low_mask) | (1 << control) | ((out >> control) << (control + 1))
        })
    }

    /// The classical gates by name on their natural width.
    pub fn named(name: &str) -> Option<Self> {
        match name.to_ascii_uppercase().as_str() {
            "I" | "ID" => Self::identity(1).ok(),
            "NOT" | "X" => Self::not(1, 0).ok(),
            "CNOT" | "CX" => Self::cnot(2, 0, 1).ok(),
            "SWAP" => Self::swap(2, 0, 1).ok(),
            "TOFFOLI" | "CCX" => Self::toffoli(3, 0, 1, 2).ok(),
            "FREDKIN" | "CSWAP" => Self::fredkin(3, 0, 1, 2).ok(),
            _ => None,
        }
    }

    pub const NAMES: [&'static str; 6] = ["I", "NOT", "CNOT", "SWAP", "TOFFOLI", "FREDKIN"];

    pub fn num_bits(&self) -> usize {
        self.n
    }

    pub fn apply(&self, x: usize) -> usize {
        self.perm[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.perm
    }

    /// `self ∘ other`: `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(Self {
            n: self.n,
            perm: other.perm.iter().map(|&y| self.perm[y]).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (x, &y) in self.perm.iter().enumerate() {
            inv[y] = x;
        }
        Self {
            n: self.n,
            perm: inv,
        }
    }

    /// `self ∘ g ∘ self⁻¹`.
    pub fn conjugate(&self, g: &Self) -> Result<Self> {
        self.compose(g)?.compose(&self.inverse())
    }

    /// The constant `c` with `self(x) = x ⊕ c` for all `x`, if there is one.
    pub fn as_xor_const(&self) -> Option<usize> {
        let c = self.perm[0];
        self.perm
            .iter()
            .enumerate()
            .all(|(x, &y)| y == x ^ c)
            .then_some(c)
    }

    /// Uniformly random composition of `len` NOT and CNOT gates.
    pub fn random_affine_word(n: usize, len: usize, rng: &mut SeededRng) -> Result<Self> {
        let mut g = Self::identity(n)?;
        for _ in 0..len {
            let step = if n < 2 || rng.coin() {
                Self::not(n, rng.below(n))?
            } else {
                let c = rng.below(n);
                let t = (c + 1 + rng.below(n - 1)) % n;
                Self::cnot(n, c, t)?
            };
            g = step.compose(&g)?;
        }
        Ok(g)
    }
}

fn swap_bits(x: usize, a: usize, b: usize) -> usize {
    let diff = ((x >> a) ^ (x >> b)) & 1;
    x ^ (diff << a) ^ (diff << b)
}

fn check_bits(n: usize, bits: &[usize]) -> Result<()> {
    check_width(n)?;
    for (i, &b) in bits.iter().enumerate() {
        if b >= n {
            return Err(Error::QubitOutOfRange { qubit: b, n });
        }
        if bits[..i].contains(&b) {
            return Err(Error::DuplicateTarget(b));
        }
    }
    Ok(())
}

/// Membership tests over the classical hierarchy, memoised per gate.
#[derive(Debug, Default)]
pub struct TildeClassifier {
    memo: HashMap<(ReversibleGate, usize), bool>,
}

impl TildeClassifier {
    pub fn new() -> Self {
        Self::default()
    }

    /// Level 1 is the XOR-with-constant maps; level `k` requires every
    /// conjugate of a level-1 map to sit at level `k − 1`.
    pub fn is_in_level(&mut self, g: &ReversibleGate, k: usize) -> Result<bool> {
        if k == 0 {
            return Err(Error::InvalidArgument("levels start at 1".into()));
        }
        if k == 1 {
            return Ok(g.as_xor_const().is_some());
        }
        if let Some(&hit) = self.memo.get(&(g.clone(), k)) {
            return Ok(hit);
        }
        let mut inside = true;
        for mask in 0..1usize << g.n {
            let image = g.conjugate(&ReversibleGate::xor_const(g.n, mask)?)?;
            if !self.is_in_level(&image, k - 1)? {
                inside = false;
                break;
            }
        }
        self.memo.insert((g.clone(), k), inside);
        Ok(inside)
    }

    pub fn level(&mut self, g: &ReversibleGate, max_k: usize) -> Result<Option<usize>> {
        for k in 1..=max_k {
            if self.is_in_level(g, k)? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

/// Smallest `k ≤ max_k` with `g` in level `k` of the classical hierarchy.
pub fn tilde_level(g: &ReversibleGate, max_k: usize) -> Result<Option<usize>> {
    TildeClassifier::new().level(g, max_k)
}
