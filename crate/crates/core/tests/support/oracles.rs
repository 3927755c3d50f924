//! Independent reference computations used by the integration and
//! acceptance tests. Nothing here calls into the algorithms under test.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Expected in-region share of a daughter placed uniformly in a disk of
/// `radius` around a parent uniform over a `width × height` rectangle.
/// Closed form of E[(W−|dx|)(H−|dy|)] / (W·H) over the disk; valid for
/// `radius ≤ min(width, height)`.
pub fn pcp_in_region_fraction(width: f64, height: f64, radius: f64) -> f64 {
    let wh = width * height;
    1.0 - 4.0 * radius * (width + height) / (3.0 * PI * wh) + radius * radius / (2.0 * PI * wh)
}

/// Frozen value of the fraction above for the default 1 km² region and 80 m
/// disks, cross-checked by 2000×2000 polar quadrature (agreement 2e-8).
pub const DEFAULT_IN_REGION_FRACTION: f64 = 0.933_112_482_583_246;

/// Free-space path loss in dB written out from first principles.
pub fn fspl_db(d: f64, f: f64) -> f64 {
    let c = 299_792_458.0;
    20.0 * d.log10() + 20.0 * f.log10() + 20.0 * (4.0 * PI / c).log10()
}

/// Gain-free averaged path loss (linear) for sigmoid constants `(a, b)` and
/// excess losses in dB.
pub fn avg_loss_gain_free(h: f64, r: f64, f: f64, a: f64, b: f64, los_db: f64, nlos_db: f64) -> f64 {
    let theta = (h / r.max(1e-300)).atan() * 180.0 / PI;
    let theta = if r == 0.0 { 90.0 } else { theta };
    let p = 1.0 / (1.0 + a * (-b * (theta - a)).exp());
    let excess = p * 10f64.powf(los_db / 10.0) + (1.0 - p) * 10f64.powf(nlos_db / 10.0);
    10f64.powf(fspl_db((h * h + r * r).sqrt(), f) / 10.0) * excess
}

/// Argmin over the grid `lo, lo+step, …` (plus `hi`) of `loss`.
pub fn grid_argmin(loss: impl Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> (f64, f64) {
    let n = ((hi - lo) / step).floor() as usize;
    (0..=n)
        .map(|i| lo + i as f64 * step)
        .chain([hi])
        .map(|h| (h, loss(h)))
        .fold((lo, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best })
}

/// Smallest area of an ellipse centered at `(cx, cy)` containing every point.
///
/// With the center fixed the problem is `max det M` subject to
/// `dᵢᵀ M dᵢ ≤ 1`. At the optimum at most three constraints are active: for
/// two active directions the optimum is `M = (d₁d₁ᵀ + d₂d₂ᵀ)⁻¹`, for three it
/// solves the 3×3 linear system. The answer is the feasible candidate with the
/// largest determinant.
pub fn best_area_at_center(points: &[(f64, f64)], cx: f64, cy: f64) -> f64 {
    let d: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x - cx, y - cy)).collect();
    // symmetric M stored as (m11, m12, m22)
    let feasible = |m: (f64, f64, f64)| {
        d.iter().all(|&(u, v)| m.0 * u * u + 2.0 * m.1 * u * v + m.2 * v * v <= 1.0 + 1e-9)
    };
    let mut best_det: f64 = 0.0;
    let mut consider = |m: (f64, f64, f64)| {
        let det = m.0 * m.2 - m.1 * m.1;
        if m.0 > 0.0 && det > best_det && feasible(m) {
            best_det = det;
        }
    };
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let (u1, v1) = d[i];
            let (u2, v2) = d[j];
            let (s11, s12, s22) = (u1 * u1 + u2 * u2, u1 * v1 + u2 * v2, v1 * v1 + v2 * v2);
            let det = s11 * s22 - s12 * s12;
            if det > 1e-300 {
                consider((s22 / det, -s12 / det, s11 / det));
            }
            for k in j + 1..d.len() {
                let rows: Vec<[f64; 4]> = [d[i], d[j], d[k]]
                    .iter()
                    .map(|&(u, v)| [u * u, 2.0 * u * v, v * v, 1.0])
                    .collect();
                if let Some(m) = solve3(&rows) {
                    consider(m);
                }
            }
        }
    }
    if best_det > 0.0 {
        PI / best_det.sqrt()
    } else {
        f64::INFINITY
    }
}

fn solve3(rows: &[[f64; 4]]) -> Option<(f64, f64, f64)> {
    let det3 = |a: [f64; 3], b: [f64; 3], c: [f64; 3]| {
        a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0])
    };
    let col = |r: &[f64; 4], skip: usize, with_rhs: bool| -> [f64; 3] {
        let mut out = [r[0], r[1], r[2]];
        if with_rhs {
            out[skip] = r[3];
        }
        out
    };
    let base = det3(col(&rows[0], 0, false), col(&rows[1], 0, false), col(&rows[2], 0, false));
    if base.abs() < 1e-300 {
        return None;
    }
    let cramer = |i: usize| {
        det3(col(&rows[0], i, true), col(&rows[1], i, true), col(&rows[2], i, true)) / base
    };
    Some((cramer(0), cramer(1), cramer(2)))
}

/// Minimum-area enclosing ellipse by search over the center (the shape is
/// solved exactly for each center): a grid over the bounding box followed by
/// a shrinking 8-direction pattern search from the best cells. Returns the area.
pub fn mvee_area_by_search(points: &[(f64, f64)]) -> f64 {
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in points {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    let f = |x: f64, y: f64| best_area_at_center(points, x, y);

    const N: usize = 60;
    let (hx, hy) = ((xmax - xmin) / N as f64, (ymax - ymin) / N as f64);
    let mut cells: Vec<(f64, f64, f64)> = Vec::with_capacity(N * N);
    for i in 0..=N {
        for j in 0..=N {
            let (x, y) = (xmin + i as f64 * hx, ymin + j as f64 * hy);
            cells.push((f(x, y), x, y));
        }
    }
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));

    let dirs = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
    let mut best = f64::INFINITY;
    for &(start, x0, y0) in cells.iter().take(8) {
        let (mut x, mut y, mut value) = (x0, y0, start);
        let (mut sx, mut sy) = (hx.max(1e-9), hy.max(1e-9));
        while sx.max(sy) > 1e-9 * (1.0 + xmax.abs() + ymax.abs()) {
            let mut improved = false;
            for &(dx, dy) in &dirs {
                let (nx, ny) = (x + dx * sx, y + dy * sy);
                let fv = f(nx, ny);
                if fv < value {
                    (x, y, value) = (nx, ny, fv);
                    improved = true;
                }
            }
            if !improved {
                sx *= 0.5;
                sy *= 0.5;
            }
        }
        best = best.min(value);
    }
    best
}

/// Mean silhouette written directly from the definition, O(n²) per point.
pub fn silhouette(points: &[(f64, f64)], labels: &[usize]) -> f64 {
    let dist = |i: usize, j: usize| {
        let (a, b) = (points[i], points[j]);
        ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
    };
    let k = labels.iter().max().unwrap() + 1;
    let n = points.len();
    let mut total = 0.0;
    for i in 0..n {
        let mut sums = vec![0.0; k];
        let mut counts = vec![0usize; k];
        for j in 0..n {
            if j != i {
                sums[labels[j]] += dist(i, j);
                counts[labels[j]] += 1;
            }
        }
        if counts[labels[i]] == 0 {
            continue;
        }
        let a = sums[labels[i]] / counts[labels[i]] as f64;
        let b = (0..k)
            .filter(|&c| c != labels[i] && counts[c] > 0)
            .map(|c| sums[c] / counts[c] as f64)
            .fold(f64::INFINITY, f64::min);
        let m = a.max(b);
        if m > 0.0 {
            total += (b - a) / m;
        }
    }
    total / n as f64
}
