use std::cell::RefCell;
use std::collections::HashMap;

use num_complex::Complex64;

use super::operator::{EvolutionOperator, Target};
use crate::error::{Error, Result};
use crate::model::SystemParams;

/// Accuracy order of the central stencils.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StencilOrder {
    Second,
    Fourth,
}

impl StencilOrder {
    fn accuracy(self) -> usize {
        match self {
            StencilOrder::Second => 2,
            StencilOrder::Fourth => 4,
        }
    }

    /// Half-width of the central stencil for the `k`-th derivative.
    fn half_width(self, k: usize) -> usize {
        if k == 0 {
            0
        } else {
            k.div_ceil(2) - 1 + self.accuracy() / 2
        }
    }
}

/// Fornberg's finite-difference weights for the `k`-th derivative at `x0`
/// on arbitrary nodes.
pub fn fornberg_weights(x0: f64, nodes: &[f64], k: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; k + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(k);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for m in (1..=mn).rev() {
                    c[i][m] = c1 * (m as f64 * c[i - 1][m - 1] - c5 * c[i - 1][m]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for m in (1..=mn).rev() {
                c[j][m] = (c4 * c[j][m] - m as f64 * c[j][m - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[k]).collect()
}

/// Central weights for the `k`-th derivative on integer offsets `−m..=m`
/// (unit spacing).
fn central(k: usize, order: StencilOrder) -> Vec<(i32, f64)> {
    let m = order.half_width(k) as i32;
    let nodes: Vec<f64> = (-m..=m).map(f64::from).collect();
    let w = fornberg_weights(0.0, &nodes, k);
    (-m..=m).zip(w).filter(|(_, w)| *w != 0.0).collect()
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Evaluates `f` on a `(u, v)` lattice around a point, memoised.
struct Lattice<'a, F> {
    f: &'a F,
    alpha: Complex64,
    t: f64,
    h: f64,
    cache: RefCell<HashMap<(i32, i32), Complex64>>,
}

impl<F> Lattice<'_, F>
where
    F: Fn(Complex64, f64) -> Result<Complex64>,
{
    fn value(&self, i: i32, j: i32) -> Result<Complex64> {
        if let Some(v) = self.cache.borrow().get(&(i, j)) {
            return Ok(*v);
        }
        let a = self.alpha + Complex64::new(i as f64 * self.h, j as f64 * self.h);
        let v = eval_point(self.f, a, self.t)?;
        self.cache.borrow_mut().insert((i, j), v);
        Ok(v)
    }

    /// `∂_u^a ∂_v^b f` by a tensor-product stencil.
    fn partial(&self, a: usize, b: usize, order: StencilOrder) -> Result<Complex64> {
        let (wu, wv) = (central(a, order), central(b, order));
        let mut acc = Complex64::new(0.0, 0.0);
        for &(i, x) in &wu {
            for &(j, y) in &wv {
                acc += x * y * self.value(i, j)?;
            }
        }
        Ok(acc / self.h.powi((a + b) as i32))
    }

    /// `(∂_α)^r = 2^{-r}(∂_u − i∂_v)^r`, `(∂_{α*})^r = 2^{-r}(∂_u + i∂_v)^r`.
    fn wirtinger(&self, target: Target, r: u32, order: StencilOrder) -> Result<Complex64> {
        let unit = match target {
            Target::Alpha => Complex64::new(0.0, -1.0),
            Target::AlphaConj => Complex64::new(0.0, 1.0),
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..=r {
            let d = self.partial((r - j) as usize, j as usize, order)?;
            acc += binomial(r, j) * unit.powu(j) * d;
        }
        Ok(acc * 0.5f64.powi(r as i32))
    }
}

fn eval_point<F>(f: &F, alpha: Complex64, t: f64) -> Result<Complex64>
where
    F: Fn(Complex64, f64) -> Result<Complex64>,
{
    let stencil_err = |reason: String| Error::Stencil {
        alpha_re: alpha.re,
        alpha_im: alpha.im,
        t,
        reason,
    };
    match f(alpha, t) {
        Ok(v) if v.re.is_finite() && v.im.is_finite() => Ok(v),
        Ok(v) => Err(stencil_err(format!("non-finite value {v}"))),
        Err(e) => Err(stencil_err(e.to_string())),
    }
}

/// Default step: `1e-3 · max(1, |α|)`.
pub fn default_step(alpha: Complex64) -> f64 {
    1e-3 * alpha.norm().max(1.0)
}

/// `∂f/∂t − (op f)` at `(α, t)` with central differences of step `step` in
/// `Re α`, `Im α` and `t`.
pub fn residual<F>(
    op: &EvolutionOperator,
    params: &SystemParams,
    f: &F,
    point: (Complex64, f64),
    step: f64,
    order: StencilOrder,
) -> Result<Complex64>
where
    F: Fn(Complex64, f64) -> Result<Complex64>,
{
    let (alpha, t) = point;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Stencil {
            alpha_re: alpha.re,
            alpha_im: alpha.im,
            t,
            reason: format!("step must be positive, got {step}"),
        });
    }
    let mut dt = Complex64::new(0.0, 0.0);
    for (k, w) in central(1, order) {
        dt += w * eval_point(f, alpha, t + k as f64 * step)?;
    }
    dt /= step;

    let lattice = Lattice {
        f,
        alpha,
        t,
        h: step,
        cache: RefCell::new(HashMap::new()),
    };
    let mut rhs = Complex64::new(0.0, 0.0);
    for term in op.terms() {
        let c = term.coeff.eval(params, alpha);
        rhs += c * lattice.wirtinger(term.target, term.r, order)?;
    }
    Ok(dt - rhs)
}

/// Residual magnitudes for each step, with the least-squares slope of
/// `ln |r|` against `ln h`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub steps: Vec<f64>,
    pub residuals: Vec<Complex64>,
    pub slope: f64,
}

pub fn convergence_study<F>(
    op: &EvolutionOperator,
    params: &SystemParams,
    f: &F,
    point: (Complex64, f64),
    steps: &[f64],
    order: StencilOrder,
) -> Result<ConvergenceStudy>
where
    F: Fn(Complex64, f64) -> Result<Complex64>,
{
    let residuals = steps
        .iter()
        .map(|&h| residual(op, params, f, point, h, order))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = steps.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| r.norm().ln()).collect();
    Ok(ConvergenceStudy {
        steps: steps.to_vec(),
        residuals,
        slope: least_squares_slope(&xs, &ys),
    })
}

pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_weights() {
        let w = fornberg_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert_eq!(w, vec![1.0, -2.0, 1.0]);
        let w = fornberg_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 1);
        let want = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        let w = fornberg_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 4);
        let want = [1.0, -4.0, 6.0, -4.0, 1.0];
        for (a, b) in w.iter().zip(want) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn stencil_sizes() {
        assert_eq!(central(1, StencilOrder::Second).len(), 2);
        assert_eq!(StencilOrder::Second.half_width(3), 2);
        assert_eq!(StencilOrder::Fourth.half_width(4), 3);
    }

    #[test]
    fn wirtinger_of_monomial() {
        // f = α*² α³: ∂_α² f = 6 α*² α, ∂_{α*} f = 2 α* α³
        let f = |a: Complex64, _t: f64| -> Result<Complex64> { Ok(a.conj().powu(2) * a.powu(3)) };
        let alpha = Complex64::new(0.3, -0.7);
        let lat = Lattice {
            f: &f,
            alpha,
            t: 0.0,
            h: 1e-2,
            cache: RefCell::new(HashMap::new()),
        };
        let d2 = lat.wirtinger(Target::Alpha, 2, StencilOrder::Fourth).unwrap();
        assert!((d2 - 6.0 * alpha.conj().powu(2) * alpha).norm() < 1e-8);
        let d1 = lat.wirtinger(Target::AlphaConj, 1, StencilOrder::Fourth).unwrap();
        assert!((d1 - 2.0 * alpha.conj() * alpha.powu(3)).norm() < 1e-8);
    }

    #[test]
    fn failing_candidate_is_a_stencil_error() {
        let op = EvolutionOperator::new();
        let p = SystemParams::new(1.0, 0.1, 0.1).unwrap();
        let f = |_a: Complex64, t: f64| -> Result<Complex64> {
            if t > 0.0 {
                Err(Error::domain("past the guard"))
            } else {
                Ok(Complex64::new(1.0, 0.0))
            }
        };
        let r = residual(&op, &p, &f, (Complex64::new(0.0, 0.0), 0.0), 1e-3, StencilOrder::Second);
        assert!(matches!(r, Err(Error::Stencil { .. })));
        let r = residual(&op, &p, &f, (Complex64::new(0.0, 0.0), 0.0), 0.0, StencilOrder::Second);
        assert!(matches!(r, Err(Error::Stencil { .. })));
    }
}
