//! Dirichlet characters, enumerated by a mixed-radix index over a fixed set
//! of generators of (Z/qZ)^×.
//!
//! Generators, in order of increasing prime: for p^e with p odd the least
//! primitive root mod p^e; for 4 the class of −1; for 2^e with e ≥ 3 the
//! classes of −1 and 5. A character is the exponent tuple (a_1, …, a_r),
//! χ(g_i) = e(a_i / ord g_i), and the index is the tuple read as a mixed-radix
//! number with a_1 most significant.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::sieve::{euler_phi, factor, gcd};

#[derive(Debug, Clone, PartialEq)]
struct Component {
    prime: u64,
    modulus: u64,
    /// Orders of the generators of this component (0, 1 or 2 entries).
    orders: Vec<u64>,
    /// Discrete logarithms of each residue mod `modulus`; `None` for non-units.
    logs: Vec<Option<[u64; 2]>>,
}

impl Component {
    fn new(p: u64, e: u32) -> Component {
        let pe = p.pow(e);
        if p == 2 {
            let mut logs = vec![None; pe as usize];
            match e {
                1 => {
                    logs[1] = Some([0, 0]);
                    Component { prime: 2, modulus: 2, orders: vec![], logs }
                }
                2 => {
                    logs[1] = Some([0, 0]);
                    logs[3] = Some([1, 0]);
                    Component { prime: 2, modulus: 4, orders: vec![2], logs }
                }
                _ => {
                    let ord5 = pe / 4;
                    let mut x = 1u64;
                    for v in 0..ord5 {
                        logs[x as usize] = Some([0, v]);
                        logs[(pe - x) as usize] = Some([1, v]);
                        x = x * 5 % pe;
                    }
                    Component { prime: 2, modulus: pe, orders: vec![2, ord5], logs }
                }
            }
        } else {
            let g = primitive_root(p, e);
            let order = pe / p * (p - 1);
            let mut logs = vec![None; pe as usize];
            let mut x = 1u64;
            for k in 0..order {
                logs[x as usize] = Some([k, 0]);
                x = x * g % pe;
            }
            Component { prime: p, modulus: pe, orders: vec![order], logs }
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Least primitive root modulo p^e, p an odd prime.
fn primitive_root(p: u64, e: u32) -> u64 {
    let pe = p.pow(e);
    let order = pe / p * (p - 1);
    let prime_divisors: Vec<u64> = factor(order).into_iter().map(|(q, _)| q).collect();
    (2..pe)
        .find(|&g| {
            gcd(g, p) == 1 && prime_divisors.iter().all(|&q| pow_mod(g, order / q, pe) != 1)
        })
        .expect("odd prime powers have primitive roots")
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCharacter {
    modulus: u64,
    index: u64,
    /// L: every value is an L-th root of unity.
    order: u64,
    /// χ(n) = e(k / L) for n mod q, `None` when gcd(n, q) > 1.
    exponents: Vec<Option<u64>>,
    primitive: bool,
}

impl DirichletCharacter {
    /// Number of characters mod q, i.e. φ(q).
    pub fn count(modulus: u64) -> u64 {
        if modulus <= 1 {
            1
        } else {
            euler_phi(modulus)
        }
    }

    pub fn trivial() -> DirichletCharacter {
        DirichletCharacter {
            modulus: 1,
            index: 0,
            order: 1,
            exponents: vec![Some(0)],
            primitive: true,
        }
    }

    pub fn new(modulus: u64, index: u64) -> Result<DirichletCharacter> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let count = Self::count(modulus);
        if index >= count {
            return Err(Error::CharacterIndex { modulus, index, count });
        }
        if modulus == 1 {
            return Ok(Self::trivial());
        }
        if modulus > 10_000 {
            return Err(Error::InvalidArgument(format!("modulus {modulus} too large")));
        }
        let comps: Vec<Component> = factor(modulus)
            .into_iter()
            .map(|(p, e)| Component::new(p, e))
            .collect();
        let orders: Vec<u64> = comps.iter().flat_map(|c| c.orders.iter().copied()).collect();

        // index -> exponent tuple, first generator most significant
        let mut digits = vec![0u64; orders.len()];
        let mut rest = index;
        for (slot, &o) in digits.iter_mut().zip(&orders).rev() {
            *slot = rest % o;
            rest /= o;
        }

        let order = orders.iter().fold(1u64, |l, &o| l / gcd(l, o) * o);

        let mut primitive = true;
        let mut at = 0;
        for c in &comps {
            let a = &digits[at..at + c.orders.len()];
            let ok = match (c.prime, c.modulus) {
                (2, 2) => false,
                (2, 4) => a[0] == 1,
                (2, _) => a[1] % 2 == 1,
                (p, m) if m == p => a[0] != 0,
                (p, _) => !a[0].is_multiple_of(p),
            };
            primitive &= ok;
            at += c.orders.len();
        }

        let mut exponents = vec![None; modulus as usize];
        for (n, slot) in exponents.iter_mut().enumerate() {
            let mut k = 0u64;
            let mut unit = true;
            let mut at = 0;
            for c in &comps {
                match c.logs[n % c.modulus as usize] {
                    Some(l) => {
                        for (j, &o) in c.orders.iter().enumerate() {
                            k = (k + digits[at + j] * l[j] % o * (order / o)) % order;
                        }
                    }
                    None => unit = false,
                }
                at += c.orders.len();
            }
            if unit {
                *slot = Some(k);
            }
        }

        Ok(DirichletCharacter { modulus, index, order, exponents, primitive })
    }

    /// All characters mod q in index order.
    pub fn all(modulus: u64) -> Result<Vec<DirichletCharacter>> {
        (0..Self::count(modulus)).map(|i| Self::new(modulus, i)).collect()
    }

    pub fn primitive_characters(modulus: u64) -> Result<Vec<DirichletCharacter>> {
        Ok(Self::all(modulus)?.into_iter().filter(|c| c.primitive).collect())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn order_bound(&self) -> u64 {
        self.order
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|e| matches!(e, None | Some(0)))
    }

    /// χ takes only the values 0, ±1.
    pub fn is_real(&self) -> bool {
        self.exponents
            .iter()
            .all(|e| e.is_none_or(|k| 2 * k % self.order == 0))
    }

    /// 0 for even characters, 1 for odd ones.
    pub fn parity(&self) -> u8 {
        match self.exponents[(self.modulus - 1) as usize] {
            Some(k) if k != 0 => 1,
            _ => 0,
        }
    }

    /// Exponent k with χ(n) = e(k/L), or `None` if gcd(n, q) > 1.
    pub fn exponent(&self, n: u64) -> Option<u64> {
        self.exponents[(n % self.modulus) as usize]
    }

    pub fn value(&self, n: u64) -> Complex64 {
        match self.exponent(n) {
            None => Complex64::new(0.0, 0.0),
            Some(0) => Complex64::new(1.0, 0.0),
            Some(k) => root_of_unity(k, self.order),
        }
    }

    pub fn conjugate_index(&self) -> u64 {
        let target: Vec<Option<u64>> = self
            .exponents
            .iter()
            .map(|e| e.map(|k| (self.order - k) % self.order))
            .collect();
        (0..Self::count(self.modulus))
            .find(|&i| {
                Self::new(self.modulus, i).is_ok_and(|c| {
                    c.exponents
                        .iter()
                        .zip(&target)
                        .all(|(a, b)| match (a, b) {
                            (Some(x), Some(y)) => x * self.order == y * c.order,
                            (None, None) => true,
                            _ => false,
                        })
                })
            })
            .unwrap_or(self.index)
    }
}

/// e(k/L) with exact values at the quarter turns.
pub(crate) fn root_of_unity(k: u64, l: u64) -> Complex64 {
    let k = k % l;
    if (4 * k).is_multiple_of(l) {
        return match 4 * k / l {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let t = TAU * k as f64 / l as f64;
    Complex64::new(t.cos(), t.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// χ mod q is primitive iff it is not induced from any proper divisor d,
    /// i.e. for every d | q, d < q, some n ≡ 1 mod d coprime to q has χ(n) ≠ 1.
    fn primitive_by_induction(c: &DirichletCharacter) -> bool {
        let q = c.modulus();
        (1..q).filter(|d| q.is_multiple_of(*d)).all(|d| {
            (1..q).any(|n| n % d == 1 % d && gcd(n, q) == 1 && c.exponent(n) != Some(0))
        })
    }

    #[test]
    fn multiplicative_and_periodic() {
        for q in 2..=40u64 {
            for c in DirichletCharacter::all(q).unwrap() {
                for m in 1..q {
                    for n in 1..q {
                        let lhs = c.value(m * n);
                        let rhs = c.value(m) * c.value(n);
                        assert!((lhs - rhs).norm() < 1e-12, "q={q} idx={}", c.index());
                    }
                    assert_eq!(c.value(m), c.value(m + 7 * q));
                }
            }
        }
    }

    #[test]
    fn characters_are_distinct_and_orthogonal() {
        for q in 1..=50u64 {
            let chars = DirichletCharacter::all(q).unwrap();
            let phi = DirichletCharacter::count(q) as f64;
            for a in &chars {
                for b in &chars {
                    let s: Complex64 = (1..=q).map(|n| a.value(n) * b.value(n).conj()).sum();
                    let expect = if a.index() == b.index() { phi } else { 0.0 };
                    assert!((s - expect).norm() < 1e-9, "q={q} {} {}", a.index(), b.index());
                }
            }
        }
    }

    #[test]
    fn primitivity_matches_induction_oracle() {
        for q in 1..=60u64 {
            for c in DirichletCharacter::all(q).unwrap() {
                assert_eq!(c.is_primitive(), primitive_by_induction(&c), "q={q} idx={}", c.index());
            }
        }
    }

    #[test]
    fn primitive_counts() {
        // number of primitive characters mod q (OEIS A007431)
        let expected = [1, 0, 1, 1, 3, 0, 5, 2, 4, 0, 9, 1, 11, 0, 3, 4, 15, 0, 17, 3];
        for (i, &n) in expected.iter().enumerate() {
            let q = i as u64 + 1;
            assert_eq!(DirichletCharacter::primitive_characters(q).unwrap().len(), n, "q={q}");
        }
    }

    #[test]
    fn mod_four_and_index_order() {
        let c = DirichletCharacter::new(4, 1).unwrap();
        assert!(c.is_primitive());
        assert_eq!(c.parity(), 1);
        assert_eq!(c.value(3), Complex64::new(-1.0, 0.0));
        assert_eq!(c.value(2), Complex64::new(0.0, 0.0));
        let c5 = DirichletCharacter::new(5, 1).unwrap();
        // generator 2, χ(2) = i
        assert_eq!(c5.value(2), Complex64::new(0.0, 1.0));
        assert!(!c5.is_real());
        assert_eq!(c5.conjugate_index(), 3);
        assert!(DirichletCharacter::new(5, 0).unwrap().is_principal());
    }

    #[test]
    fn bad_index() {
        assert_eq!(
            DirichletCharacter::new(7, 6),
            Err(Error::CharacterIndex { modulus: 7, index: 6, count: 6 })
        );
    }
}
