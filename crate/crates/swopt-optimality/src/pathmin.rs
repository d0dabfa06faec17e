//! Exact minimization of c·y + ‖y‖₂ over a box or a product of scaled
//! simplices. Every minimizer lies on the projection path t ↦ Π(−t·c)
//! (with t the norm of the minimizer), the path is piecewise affine in t,
//! and on each affine piece the objective is A + Bt + √(C + 2Dt + Et²),
//! whose minimum is available in closed form. These evaluations certify
//! the dual lower bound in the θ solver, so they must never exceed the
//! true minimum.

use nalgebra::DVector;

/// Minimum of g(t) = ca + cb·t + sqrt(aa + 2·ab·t + bb·t²) over [ta, tb].
fn segment_min(ca: f64, cb: f64, aa: f64, ab: f64, bb: f64, ta: f64, tb: f64) -> f64 {
    let g = |t: f64| ca + cb * t + (aa + 2.0 * ab * t + bb * t * t).max(0.0).sqrt();
    let mut best = g(ta).min(g(tb));
    if bb > 0.0 {
        // interior stationary points satisfy (ab + bb·t)² = cb²·(radicand)
        let qa = bb * bb - cb * cb * bb;
        let qb = 2.0 * ab * bb - 2.0 * cb * cb * ab;
        let qc = ab * ab - cb * cb * aa;
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            for root in [(-qb - sq), (-qb + sq)] {
                if qa.abs() > f64::MIN_POSITIVE {
                    let t = root / (2.0 * qa);
                    if t > ta && t < tb {
                        best = best.min(g(t));
                    }
                }
            }
        }
        if qa.abs() <= f64::MIN_POSITIVE && qb.abs() > f64::MIN_POSITIVE {
            let t = -qc / qb;
            if t > ta && t < tb {
                best = best.min(g(t));
            }
        }
    }
    best
}

/// Exact minimum of c·y + ‖y‖₂ over the box Π[lo_i, hi_i], which must
/// contain the origin.
pub(crate) fn min_linear_norm_box(c: &DVector<f64>, lo: &[f64], hi: &[f64]) -> f64 {
    // along y(t) = clip(−t·c, lo, hi) each coordinate clips at most once
    let mut events: Vec<(f64, usize)> = Vec::new();
    let mut b_free = 0.0;
    for i in 0..c.len() {
        if c[i] > 0.0 {
            events.push((-lo[i] / c[i], i));
            b_free += c[i] * c[i];
        } else if c[i] < 0.0 {
            events.push((-hi[i] / c[i], i));
            b_free += c[i] * c[i];
        }
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut best = 0.0;
    let mut a_clip = 0.0;
    let mut c_clip = 0.0;
    let mut t_prev = 0.0;
    for &(t_ev, i) in &events {
        if t_ev > t_prev {
            // g(t) = a_clip − b_free·t + sqrt(c_clip + b_free·t²)
            best = best.min(segment_min(a_clip, -b_free, c_clip, 0.0, b_free, t_prev, t_ev));
            t_prev = t_ev;
        }
        let bound = if c[i] > 0.0 { lo[i] } else { hi[i] };
        b_free -= c[i] * c[i];
        a_clip += c[i] * bound;
        c_clip += bound * bound;
    }
    best.min(a_clip + c_clip.sqrt())
}

/// One interval's weight row: the current point on the simplex, the √Δτ
/// scale, and the scaled gradient coefficients for its coordinates.
pub(crate) struct SimplexBlock {
    pub d: DVector<f64>,
    pub sw: f64,
    pub c: DVector<f64>,
}

struct Piece {
    lo: f64,
    hi: f64,
    ca: f64,
    cb: f64,
    aa: f64,
    ab: f64,
    bb: f64,
}

/// Affine pieces of one block's projection path: for each support set the
/// projection is affine in t, valid on the interval where its coordinates
/// stay nonnegative and the excluded ones stay below the threshold.
fn block_pieces(blk: &SimplexBlock) -> Vec<Piece> {
    let q = blk.d.len();
    let w: Vec<f64> = (0..q).map(|j| blk.c[j] / blk.sw).collect();
    let mut pieces = Vec::new();
    for mask in 1u32..(1 << q) {
        let supp: Vec<usize> = (0..q).filter(|&j| mask & (1 << j) != 0).collect();
        let n = supp.len() as f64;
        let tau_c = (supp.iter().map(|&j| blk.d[j]).sum::<f64>() - 1.0) / n;
        let w_bar = supp.iter().map(|&j| w[j]).sum::<f64>() / n;
        // y_j(t) = sw[(d_j − tau_c) − t(w_j − w̄)] on the support, 0 elsewhere
        let mut t_lo = 0.0f64;
        let mut t_hi = f64::INFINITY;
        let mut apply = |alpha: f64, beta: f64| {
            // require alpha + beta·t ≥ 0
            if beta.abs() <= 1e-300 {
                if alpha < -1e-12 {
                    t_lo = f64::INFINITY;
                }
            } else if beta > 0.0 {
                t_lo = t_lo.max(-alpha / beta);
            } else {
                t_hi = t_hi.min(-alpha / beta);
            }
        };
        for &j in &supp {
            apply(blk.d[j] - tau_c, -(w[j] - w_bar));
        }
        for j in 0..q {
            if mask & (1 << j) == 0 {
                // p_j − τ ≤ 0 keeps j excluded
                apply(-(blk.d[j] - tau_c), w[j] - w_bar);
            }
        }
        if t_lo > t_hi + 1e-12 || !t_lo.is_finite() {
            continue;
        }
        let mut ca = 0.0;
        let mut cb = 0.0;
        let mut aa = 0.0;
        let mut ab = 0.0;
        let mut bb = 0.0;
        for &j in &supp {
            let a = blk.sw * (blk.d[j] - tau_c);
            let b = -blk.sw * (w[j] - w_bar);
            ca += blk.c[j] * a;
            cb += blk.c[j] * b;
            aa += a * a;
            ab += a * b;
            bb += b * b;
        }
        pieces.push(Piece { lo: t_lo.max(0.0), hi: t_hi, ca, cb, aa, ab, bb });
    }
    pieces.sort_by(|x, y| x.lo.total_cmp(&y.lo));
    pieces
}

/// Exact minimum of c·y + ‖y‖₂ over the product of shifted scaled
/// simplices sw_k(Δ − d_k). Returns None if a block's path tiling is
/// inconsistent, which signals degenerate data rather than a math error.
pub(crate) fn min_linear_norm_simplex_product(blocks: &[SimplexBlock]) -> Option<f64> {
    if blocks.is_empty() {
        return Some(0.0);
    }
    let piece_lists: Vec<Vec<Piece>> = blocks.iter().map(block_pieces).collect();
    let mut cuts: Vec<f64> = vec![0.0];
    for list in &piece_lists {
        for p in list {
            if p.lo > 0.0 && p.lo.is_finite() {
                cuts.push(p.lo);
            }
            if p.hi.is_finite() {
                cuts.push(p.hi);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * (1.0 + b.abs()));
    // one synthetic cut past the last: every path is constant there
    let tail = cuts.last().copied().unwrap_or(0.0) + 1.0;
    cuts.push(tail);

    let mut idx = vec![0usize; blocks.len()];
    let mut best = 0.0f64;
    for win in cuts.windows(2) {
        let (ta, tb) = (win[0], win[1]);
        if tb - ta <= 1e-15 * (1.0 + ta.abs()) {
            continue;
        }
        let tm = 0.5 * (ta + tb);
        let mut ca = 0.0;
        let mut cb = 0.0;
        let mut aa = 0.0;
        let mut ab = 0.0;
        let mut bb = 0.0;
        for (k, list) in piece_lists.iter().enumerate() {
            while idx[k] < list.len()
                && !(list[idx[k]].lo <= tm + 1e-12 && tm <= list[idx[k]].hi + 1e-12)
            {
                idx[k] += 1;
            }
            let p = list.get(idx[k])?;
            ca += p.ca;
            cb += p.cb;
            aa += p.aa;
            ab += p.ab;
            bb += p.bb;
        }
        best = best.min(segment_min(ca, cb, aa, ab, bb, ta, tb));
    }
    Some(best)
}
