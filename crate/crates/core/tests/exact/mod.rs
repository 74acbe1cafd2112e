//! Exact eigenvalue counts for the parity blocks of `T_P`.
//!
//! `W T` with `W = diag(1/beta)` is the symmetric cyclic matrix with diagonal
//! `alpha_i + alpha_{i-1}` and off-diagonal `-alpha_i`. On a parity block of
//! sign `s` the wrap-around entry picks up the factor `s`. By Sylvester's law
//! the number of negative pivots of `L_s - mu W` equals the number of block
//! eigenvalues below `mu`. All arithmetic is rational, so the count is exact
//! for the binary values of `alpha`, `beta` and `mu`.

use num::{BigRational, Signed, Zero};

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

pub struct Pencil {
    diag: Vec<BigRational>,
    off: Vec<BigRational>,
    weight: Vec<BigRational>,
}

impl Pencil {
    pub fn new(alpha: &[f64], beta: &[f64], half: usize) -> Self {
        let len = alpha.len();
        Pencil {
            diag: (0..half)
                .map(|i| rat(alpha[i]) + rat(alpha[(i + len - 1) % len]))
                .collect(),
            off: (0..half).map(|i| -rat(alpha[i])).collect(),
            weight: (0..half).map(|i| rat(beta[i]).recip()).collect(),
        }
    }

    /// Eigenvalues of the block with sign `sign` strictly below `mu`, or
    /// `None` when elimination meets a zero pivot.
    pub fn count_below(&self, mu: &BigRational, sign: i8) -> Option<usize> {
        let n = self.diag.len();
        let a: Vec<BigRational> = (0..n)
            .map(|i| &self.diag[i] - mu * &self.weight[i])
            .collect();
        let corner = if sign > 0 {
            self.off[n - 1].clone()
        } else {
            -self.off[n - 1].clone()
        };
        let mut negative = 0;
        let mut pivot = |d: &BigRational| -> Option<()> {
            if d.is_zero() {
                return None;
            }
            if d.is_negative() {
                negative += 1;
            }
            Some(())
        };
        if n == 2 {
            let b = &self.off[0] + &corner;
            pivot(&a[0])?;
            pivot(&(&a[1] - &b * &b / &a[0]))?;
            return Some(negative);
        }
        // arrow elimination: row i couples to i+1 and to the last row
        let mut d = a[0].clone();
        let mut h = corner;
        let mut z = a[n - 1].clone();
        for i in 0..n - 2 {
            pivot(&d)?;
            let b = &self.off[i];
            let next_d = &a[i + 1] - b * b / &d;
            let link = if i + 1 == n - 2 {
                self.off[n - 2].clone()
            } else {
                BigRational::zero()
            };
            let next_h = link - b * &h / &d;
            z -= &h * &h / &d;
            d = next_d;
            h = next_h;
        }
        pivot(&d)?;
        z -= &h * &h / &d;
        pivot(&z)?;
        Some(negative)
    }

    /// Finds a rational `mu` in `(lo, hi)` below which exactly `below_s`
    /// symmetric and `below_a` antisymmetric eigenvalues lie.
    pub fn separate(&self, lo: f64, hi: f64, below_s: usize, below_a: usize) -> Result<(), String> {
        let target = below_s + below_a;
        let mut lo = rat(lo);
        let mut hi = rat(hi);
        let two = BigRational::from_integer(2.into());
        for _ in 0..400 {
            let mut mu = (&lo + &hi) / &two;
            let mut counts = None;
            for nudge in 1..8 {
                counts = self.count_below(&mu, 1).zip(self.count_below(&mu, -1));
                if counts.is_some() {
                    break;
                }
                mu = &mu + (&hi - &mu) / BigRational::from_integer((nudge + 7).into());
            }
            let (s, a) = counts.ok_or("singular pencil")?;
            match (s + a).cmp(&target) {
                std::cmp::Ordering::Less => lo = mu,
                std::cmp::Ordering::Greater => hi = mu,
                std::cmp::Ordering::Equal if s == below_s && a == below_a => return Ok(()),
                std::cmp::Ordering::Equal => {
                    return Err(format!("split {s}+{a}, expected {below_s}+{below_a}"))
                }
            }
        }
        Err("no separating point found".into())
    }
}
