//! Small utilities for polynomials with rational coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{FieldTower, Node, Rational};

/// `Φ_n` with rational coefficients, low to high.
pub fn cyclotomic(n: u32) -> Vec<Rational> {
    assert!(n >= 1);
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut p = vec![Rational::zero(); n as usize + 1];
    p[0] = -Rational::one();
    p[n as usize] = Rational::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = exact_div(&p, &cyclotomic(d));
        }
    }
    p
}

fn exact_div(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![Rational::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &b[db];
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(r.iter().all(Zero::is_zero));
    q
}

/// All distinct rational roots, in increasing order.
pub fn rational_roots(p: &[Rational]) -> Vec<Rational> {
    let mut coeffs: Vec<Rational> = p.to_vec();
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    if lead_zeros > 0 {
        roots.push(Rational::zero());
        coeffs.drain(..lead_zeros);
    }
    if coeffs.len() >= 2 {
        let lcm = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let a0 = ints[0].abs();
        let an = ints.last().expect("nonempty").abs();
        for num in divisors(&a0) {
            for den in divisors(&an) {
                if num.gcd(&den) != BigInt::one() {
                    continue;
                }
                for sign in [1, -1] {
                    let cand = Rational::new(num.clone() * sign, den.clone());
                    if horner(&coeffs, &cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    roots
}

fn horner(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let root = n.sqrt();
    let mut d = BigInt::one();
    while d <= root {
        if (n % &d).is_zero() {
            let other = n / &d;
            if other != d {
                large.push(other);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Minimal polynomial over ℚ of multiplication by `a` on the tower algebra
/// (monic, low to high). For a reducible tower this is the lcm of the
/// pointwise minimal polynomials.
pub fn minimal_polynomial(t: &FieldTower, a: &Node) -> Vec<Rational> {
    // Incremental echelon form of the powers 1, a, a², … with the
    // combination of powers each reduced row represents.
    let n_pow_max = t.absolute_degree() + 1;
    let mut rows: Vec<(usize, Vec<Rational>, Vec<Rational>)> = Vec::new();
    let mut power = Node::one();
    for k in 0..=n_pow_max {
        let mut v = t.flatten(&power);
        let mut combo = vec![Rational::zero(); k + 1];
        combo[k] = Rational::one();
        for (pivot, row, row_combo) in &rows {
            let c = v[*pivot].clone();
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row) {
                *x -= &c * y;
            }
            for (x, y) in combo.iter_mut().zip(row_combo) {
                *x -= &c * y;
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => return combo,
            Some(p) => {
                let inv = v[p].recip();
                for x in v.iter_mut() {
                    *x *= &inv;
                }
                for x in combo.iter_mut() {
                    *x *= &inv;
                }
                // keep rows fully reduced against the new pivot
                for (_, row, row_combo) in rows.iter_mut() {
                    let c = row[p].clone();
                    if c.is_zero() {
                        continue;
                    }
                    for (x, y) in row.iter_mut().zip(&v) {
                        *x -= &c * y;
                    }
                    row_combo.resize(combo.len(), Rational::zero());
                    for (x, y) in row_combo.iter_mut().zip(&combo) {
                        *x -= &c * y;
                    }
                }
                rows.push((p, v, combo));
            }
        }
        power = t.mul(&power, a);
    }
    unreachable!("powers beyond the absolute degree are dependent")
}
