//! One-dimensional minimization and root bracketing helpers.

/// Golden-section search for a minimum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `tol`. Returns `(x, f(x))` for the best point
/// evaluated.
pub fn golden_section<E, F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64), E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    for cand in [(lo, f_lo), (hi, f_hi)] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    Ok(best)
}

/// Bisection on a boolean predicate that is `false` at `lo` and `true` at
/// `hi`. Returns the final bracket `(lo, hi)` with `hi − lo ≤ width`.
pub fn bisect_predicate<E, F>(
    mut pred: F,
    mut lo: f64,
    mut hi: f64,
    width: f64,
) -> Result<(f64, f64), E>
where
    F: FnMut(f64) -> Result<bool, E>,
{
    while (hi - lo).abs() > width {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}
