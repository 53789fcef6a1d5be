//! Test-only oracles, independent of the closed-form integrals in the crate.

#![allow(dead_code)]

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 50)
}

/// The mixture density written out from its definition.
pub fn mixture_pdf(p: f64) -> impl Fn(f64) -> f64 {
    move |x: f64| {
        if (0.0..0.5).contains(&x) {
            p
        } else if (0.5..1.0).contains(&x) {
            1.0
        } else if (1.0..=1.5).contains(&x) {
            1.0 - p
        } else {
            0.0
        }
    }
}

/// `∫ min_a (x - a)^2 f(x) dx` by quadrature, splitting at the given
/// breakpoints of `f` and at the Voronoi boundaries.
pub fn quadrature_distortion(pdf: &dyn Fn(f64) -> f64, breaks: &[f64], points: &[f64]) -> f64 {
    let (lo, hi) = (breaks[0], *breaks.last().unwrap());
    let mut cuts: Vec<f64> = breaks.to_vec();
    cuts.extend(points.windows(2).map(|w| 0.5 * (w[0] + w[1])).filter(|&b| b > lo && b < hi));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let nearest = |x: f64| {
        points
            .iter()
            .map(|a| (x - a) * (x - a))
            .fold(f64::INFINITY, f64::min)
    };
    cuts.windows(2)
        .map(|w| {
            // evaluate strictly inside the segment so the piece is unambiguous
            let (a, b) = (w[0], w[1]);
            let mid = 0.5 * (a + b);
            let level = pdf(mid);
            let g = |x: f64| level * nearest(x.clamp(a, b));
            adaptive_simpson(&g, a, b, 1e-16)
        })
        .sum()
}

/// Every `n`-point codebook's Lloyd fixed-point residual: the largest
/// distance between a point and the centroid of its cell, by quadrature.
pub fn centroid_residual(pdf: &dyn Fn(f64) -> f64, breaks: &[f64], points: &[f64]) -> f64 {
    let (lo, hi) = (breaks[0], *breaks.last().unwrap());
    let mut edges = vec![lo];
    edges.extend(points.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    edges.push(hi);
    points
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let (l, h) = (edges[i], edges[i + 1]);
            let mut cuts = vec![l];
            cuts.extend(breaks.iter().copied().filter(|&b| b > l && b < h));
            cuts.push(h);
            let (mut mass, mut moment) = (0.0, 0.0);
            for w in cuts.windows(2) {
                let t = pdf(0.5 * (w[0] + w[1]));
                mass += t * (w[1] - w[0]);
                moment += adaptive_simpson(&|x| t * x, w[0], w[1], 1e-16);
            }
            (moment / mass - a).abs()
        })
        .fold(0.0, f64::max)
}

pub const MIXTURE_BREAKS: [f64; 4] = [0.0, 0.5, 1.0, 1.5];
