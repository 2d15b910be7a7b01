use nalgebra::{Complex, DVector};

use crate::fock::{PureState, TwoModeCutoff};
use crate::scalar::Real;

/// Direction of the 50/50 mode rotation α = (a + b)/√2, β = (a − b)/√2.
///
/// The rotation is its own inverse, so both directions apply the same
/// amplitude map; the tag only documents intent at call sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rotation {
    /// Input amplitudes are over `|n_α, n_β⟩`, output over `|n_a, n_b⟩`.
    AlphaBetaToAb,
    /// Input amplitudes are over `|n_a, n_b⟩`, output over `|n_α, n_β⟩`.
    AbToAlphaBeta,
}

/// `ln √C(n, k) − (n/2) ln 2` for k = 0..=n.
fn log_binomial_amplitudes(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut ln_c = 0.0f64;
    let half_n_ln2 = 0.5 * n as f64 * std::f64::consts::LN_2;
    for k in 0..=n {
        if k > 0 {
            ln_c += ((n - k + 1) as f64 / k as f64).ln();
        }
        out.push(0.5 * ln_c - half_n_ln2);
    }
    out
}

/// Solves `(M − shift)x = rhs` for symmetric tridiagonal M (diagonal `diag`,
/// off-diagonal `off`) by Gaussian elimination with partial pivoting.
fn tridiagonal_solve<T: Real>(diag: &[T], off: &[T], shift: T, rhs: &mut [T]) {
    let n = diag.len();
    if n == 1 {
        let d = diag[0] - shift;
        rhs[0] /= if d == T::zero() { T::lit(1e-300) } else { d };
        return;
    }
    let tiny = T::lit(1e-300);
    let mut d: Vec<T> = diag.iter().map(|&x| x - shift).collect();
    let dl = off.to_vec();
    let mut du = off.to_vec();
    let mut du2 = vec![T::zero(); n];
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == T::zero() {
                d[i] = tiny;
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            rhs[i + 1] -= fact * rhs[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = temp;
            let b = rhs[i];
            rhs[i] = rhs[i + 1];
            rhs[i + 1] = b - fact * rhs[i + 1];
        }
    }
    if d[n - 1] == T::zero() {
        d[n - 1] = tiny;
    }
    rhs[n - 1] /= d[n - 1];
    rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
    for i in (0..n.saturating_sub(2)).rev() {
        rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / d[i];
    }
}

fn normalize<T: Real>(v: &mut [T]) {
    let norm = v.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

/// Re-expresses a state in the rotated mode basis.
///
/// Works sector by sector in the total photon number N, which the rotation
/// conserves. Inside a sector, `|n, N − n⟩` of the rotated modes is the
/// eigenvector with eigenvalue n of the tridiagonal matrix of α†α in the
/// `|k, N − k⟩` basis. The column for n = N is the binomial distribution;
/// each further column starts from `β†α` applied to its neighbour, which
/// fixes the sign, and is then refined by inverse iteration at the exact
/// integer eigenvalue. The output cutoff is square and large enough to hold
/// every populated sector exactly.
pub fn rotate_modes<T: Real>(state: &PureState<T>, _direction: Rotation) -> PureState<T> {
    let c = state.cutoff();
    let top = state.max_total_occupation();
    let n_out = top.max(c.first.n_max()).max(c.second.n_max());
    let out_cut = TwoModeCutoff::square(n_out);
    let mut out = DVector::zeros(out_cut.dim());
    let half = T::lit(0.5);

    for sector in 0..=top {
        // input columns present in this sector: first-mode occupation n, second N − n
        let n_hi = sector.min(c.first.n_max());
        let n_lo = sector.saturating_sub(c.second.n_max());
        if n_lo > n_hi {
            continue;
        }
        let amps: Vec<Complex<T>> = (n_lo..=n_hi).map(|n| state.amplitude(n, sector - n)).collect();
        if amps.iter().all(|z| z.norm_sqr() == T::zero()) {
            continue;
        }
        // α†α = ½(N + a†b + b†a) on |k, N − k⟩
        let diag = vec![half * T::from_count(sector); sector + 1];
        let off: Vec<T> = (0..sector)
            .map(|k| half * T::from_count((k + 1) * (sector - k)).sqrt())
            .collect();
        let mut col: Vec<T> = log_binomial_amplitudes(sector)
            .into_iter()
            .map(|l| T::lit(l.exp()))
            .collect();
        let mut acc = vec![Complex::new(T::zero(), T::zero()); sector + 1];
        let mut n = sector;
        loop {
            if n <= n_hi {
                let d = amps[n - n_lo];
                if d.norm_sqr() != T::zero() {
                    for (k, x) in col.iter().enumerate() {
                        acc[k] += d * Complex::new(*x, T::zero());
                    }
                }
            }
            if n == n_lo {
                break;
            }
            // β†α = ½(a†a + a†b − b†a − b†b) lowers n by one inside the sector
            let guide: Vec<T> = (0..=sector)
                .map(|k| {
                    let l = sector - k;
                    let mut v = (T::from_count(k) - T::from_count(l)) * col[k];
                    if k > 0 {
                        v += T::from_count(k * (l + 1)).sqrt() * col[k - 1];
                    }
                    if l > 0 {
                        v -= T::from_count((k + 1) * l).sqrt() * col[k + 1];
                    }
                    v
                })
                .collect();
            let target = T::from_count(n - 1) + T::lit(1e-9);
            let mut x = guide.clone();
            normalize(&mut x);
            for _ in 0..2 {
                tridiagonal_solve(&diag, &off, target, &mut x);
                normalize(&mut x);
            }
            let overlap = x.iter().zip(&guide).fold(T::zero(), |acc, (&a, &b)| acc + a * b);
            if overlap < T::zero() {
                for v in x.iter_mut() {
                    *v = -*v;
                }
            }
            col = x;
            n -= 1;
        }
        for (k, z) in acc.into_iter().enumerate() {
            out[out_cut.index(k, sector - k)] = z;
        }
    }
    PureState::new(out_cut, out).expect("rotation preserves the norm")
}
