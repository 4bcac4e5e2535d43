//! Host-side oracles. None of these touch the simulator.

use std::collections::VecDeque;
use std::f64::consts::PI;

use super::{ComplexSignal, CsrMatrix, Graph};

/// Expands `a` to a dense row-major matrix.
pub fn to_dense(a: &CsrMatrix) -> Vec<Vec<f64>> {
    let mut d = vec![vec![0.0; a.n_cols()]; a.n_rows()];
    for (r, row) in d.iter_mut().enumerate() {
        for (c, v) in a.row(r) {
            row[c] += v;
        }
    }
    d
}

/// Dense matrix-vector product over the expanded matrix.
pub fn dense_matvec(a: &CsrMatrix, x: &[f64]) -> Vec<f64> {
    to_dense(a)
        .iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// CSR product summing each row left to right from `0.0`: the reduction
/// order the kernels use.
pub fn reference_spmv(a: &CsrMatrix, x: &[f64]) -> Vec<f64> {
    (0..a.n_rows())
        .map(|r| a.row(r).fold(0.0, |acc, (c, v)| acc + v * x[c]))
        .collect()
}

pub fn reference_bfs(g: &Graph, src: usize) -> Vec<i64> {
    let mut dist = vec![-1; g.n_nodes()];
    let mut queue = VecDeque::from([src]);
    dist[src] = 0;
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if dist[v] < 0 {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Power iteration over the dense Google matrix
/// `G = d * (P + dangling columns of 1/N) + (1 - d) / N`.
/// Returns the ranks and the number of iterations taken.
pub fn dense_pagerank(g: &Graph, damping: f64, tol: f64, max_iter: usize) -> (Vec<f64>, usize) {
    let n = g.n_nodes();
    let nf = n as f64;
    let mut google = vec![vec![(1.0 - damping) / nf; n]; n];
    for u in 0..n {
        let deg = g.out_degree(u);
        if deg == 0 {
            for row in google.iter_mut() {
                row[u] += damping / nf;
            }
        }
        for &v in g.neighbors(u) {
            google[v][u] += damping / deg as f64;
        }
    }
    let mut r = vec![1.0 / nf; n];
    for iter in 1..=max_iter {
        let next: Vec<f64> = google
            .iter()
            .map(|row| row.iter().zip(&r).map(|(a, b)| a * b).sum())
            .collect();
        let diff: f64 = next.iter().zip(&r).map(|(a, b)| (a - b).abs()).sum();
        r = next;
        if diff <= tol {
            return (r, iter);
        }
    }
    (r, max_iter)
}

/// Sparse power iteration with the same update and summation order as the
/// [`pagerank`](super::pagerank) kernel. Returns the ranks and the number of
/// iterations taken, or `None` if `max_iter` is reached first.
pub fn sparse_pagerank(g: &Graph, damping: f64, tol: f64, max_iter: usize) -> Option<(Vec<f64>, usize)> {
    let n = g.n_nodes();
    let inv_n = 1.0 / n as f64;
    let base = (1.0 - damping) * inv_n;
    let p = g.transition_matrix();
    let flags: Vec<f64> = g
        .out_degrees()
        .iter()
        .map(|&d| if d == 0 { 1.0 } else { 0.0 })
        .collect();
    let mut r = vec![inv_n; n];
    for iter in 1..=max_iter {
        let dangling = r.iter().zip(&flags).fold(0.0, |acc, (r, f)| acc + r * f);
        let spread = dangling * inv_n;
        let links = reference_spmv(&p, &r);
        let next: Vec<f64> = links.iter().map(|y| (y + spread) * damping + base).collect();
        let diff = next
            .iter()
            .zip(&r)
            .fold(0.0, |acc, (t, old)| acc + (t - old).max(old - t));
        r = next;
        if diff <= tol {
            return Some((r, iter));
        }
    }
    None
}

fn dft(re: &[f64], im: &[f64], sign: f64) -> (Vec<f64>, Vec<f64>) {
    let n = re.len();
    (0..n)
        .map(|k| {
            let (mut sr, mut si) = (0.0, 0.0);
            for t in 0..n {
                // reduce k*t mod n first so the angle stays accurate
                let (s, c) = (sign * 2.0 * PI * ((k * t) % n) as f64 / n as f64).sin_cos();
                sr += re[t] * c - im[t] * s;
                si += re[t] * s + im[t] * c;
            }
            (sr, si)
        })
        .unzip()
}

/// `O(n^2)` forward DFT.
pub fn naive_dft(x: &ComplexSignal) -> (Vec<f64>, Vec<f64>) {
    dft(x.re(), x.im(), -1.0)
}

/// `O(n^2)` inverse DFT, including the `1/n` factor.
pub fn naive_idft(re: &[f64], im: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = re.len() as f64;
    let (r, i) = dft(re, im, 1.0);
    (r.iter().map(|v| v / n).collect(), i.iter().map(|v| v / n).collect())
}

/// Recursive decimation-in-time radix-2 FFT, `O(n log n)`, for lengths that
/// are powers of two.
pub fn recursive_fft(re: &[f64], im: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = re.len();
    if n == 1 {
        return (re.to_vec(), im.to_vec());
    }
    let pick = |v: &[f64], parity: usize| v.iter().skip(parity).step_by(2).copied().collect::<Vec<_>>();
    let (er, ei) = recursive_fft(&pick(re, 0), &pick(im, 0));
    let (or, oi) = recursive_fft(&pick(re, 1), &pick(im, 1));
    let (mut xr, mut xi) = (vec![0.0; n], vec![0.0; n]);
    for k in 0..n / 2 {
        let (s, c) = (-2.0 * PI * k as f64 / n as f64).sin_cos();
        let (tr, ti) = (or[k] * c - oi[k] * s, or[k] * s + oi[k] * c);
        xr[k] = er[k] + tr;
        xi[k] = ei[k] + ti;
        xr[k + n / 2] = er[k] - tr;
        xi[k + n / 2] = ei[k] - ti;
    }
    (xr, xi)
}

/// `||a - b||_2 / ||b||_2` over split complex vectors.
pub fn relative_l2(a: (&[f64], &[f64]), b: (&[f64], &[f64])) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..b.0.len() {
        let (dr, di) = (a.0[k] - b.0[k], a.1[k] - b.1[k]);
        num += dr * dr + di * di;
        den += b.0[k] * b.0[k] + b.1[k] * b.1[k];
    }
    (num / den).sqrt()
}

/// Largest `|a - b| / max(|b|, tiny)` over paired elements.
pub fn max_relative_error(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / y.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}
