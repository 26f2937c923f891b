use hermitian_core::{HermOp, TensorSpace};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Orthonormal basis of the real vector space of Hermitian d×d matrices:
/// diagonal units, then (E_ij+E_ji)/√2 and i(E_ij−E_ji)/√2 for i<j.
/// Deterministic order; d² elements.
pub fn hermitian_basis(space: &TensorSpace) -> Vec<HermOp> {
    let d = space.total_dim();
    let mut basis = Vec::with_capacity(d * d);
    let zero = Complex64::new(0.0, 0.0);
    for i in 0..d {
        let mut m = DMatrix::from_element(d, d, zero);
        m[(i, i)] = Complex64::new(1.0, 0.0);
        basis.push(HermOp::new(space.clone(), m).expect("diagonal unit"));
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..d {
        for j in (i + 1)..d {
            let mut re = DMatrix::from_element(d, d, zero);
            re[(i, j)] = Complex64::new(r, 0.0);
            re[(j, i)] = Complex64::new(r, 0.0);
            basis.push(HermOp::new(space.clone(), re).expect("symmetric unit"));
            let mut im = DMatrix::from_element(d, d, zero);
            im[(i, j)] = Complex64::new(0.0, r);
            im[(j, i)] = Complex64::new(0.0, -r);
            basis.push(HermOp::new(space.clone(), im).expect("antisymmetric unit"));
        }
    }
    basis
}

/// Isometry from the symmetric subspace of C^d ⊗ C^d (dimension d(d+1)/2)
/// into the full product space. Columns ordered by (i,j) with i ≤ j.
pub fn sym_isometry(d: usize) -> DMatrix<Complex64> {
    let cols = d * (d + 1) / 2;
    let mut v = DMatrix::from_element(d * d, cols, Complex64::new(0.0, 0.0));
    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut c = 0;
    for i in 0..d {
        for j in i..d {
            if i == j {
                v[(i * d + i, c)] = one;
            } else {
                v[(i * d + j, c)] = r;
                v[(j * d + i, c)] = r;
            }
            c += 1;
        }
    }
    v
}

/// Isometry from the symmetric subspace of (C^d)^⊗copies (dimension
/// C(d+copies−1, copies)) into the full product space. Columns are indexed by
/// nondecreasing tuples in lexicographic order, so for copies = 2 this agrees
/// with `sym_isometry` column for column.
pub fn sym_isometry_k(d: usize, copies: usize) -> DMatrix<Complex64> {
    assert!(d >= 1 && copies >= 1);
    let tuples = nondecreasing_tuples(d, copies);
    let dim = d.pow(copies as u32);
    let mut v = DMatrix::from_element(dim, tuples.len(), Complex64::new(0.0, 0.0));
    for (c, tuple) in tuples.iter().enumerate() {
        let arrangements = distinct_arrangements(tuple);
        let w = Complex64::new(1.0 / (arrangements.len() as f64).sqrt(), 0.0);
        for arr in &arrangements {
            let row = arr.iter().fold(0usize, |acc, &i| acc * d + i);
            v[(row, c)] = w;
        }
    }
    v
}

fn nondecreasing_tuples(d: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; len];
    loop {
        out.push(cur.clone());
        let mut k = len;
        while k > 0 && cur[k - 1] == d - 1 {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        let next = cur[k - 1] + 1;
        for slot in cur.iter_mut().skip(k - 1) {
            *slot = next;
        }
    }
    out
}

fn distinct_arrangements(tuple: &[usize]) -> Vec<Vec<usize>> {
    // tuples here are tiny (a handful of entries), so brute-force and dedupe
    let mut out = Vec::new();
    permute(&mut tuple.to_vec(), 0, &mut out);
    out.sort();
    out.dedup();
    out
}

fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Isometry from the antisymmetric subspace of C^d ⊗ C^d (dimension
/// d(d−1)/2). Columns ordered by (i,j) with i < j.
pub fn antisym_isometry(d: usize) -> DMatrix<Complex64> {
    let cols = d * (d - 1) / 2;
    let mut v = DMatrix::from_element(d * d, cols, Complex64::new(0.0, 0.0));
    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut c = 0;
    for i in 0..d {
        for j in (i + 1)..d {
            v[(i * d + j, c)] = r;
            v[(j * d + i, c)] = -r;
            c += 1;
        }
    }
    v
}

/// Kronecker product of raw complex matrices (isometries are not Hermitian,
/// so they live outside `HermOp`).
pub fn kron_mat(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

pub fn identity_mat(d: usize) -> DMatrix<Complex64> {
    DMatrix::identity(d, d)
}

/// Columns of a complex matrix as vectors.
pub fn columns(m: &DMatrix<Complex64>) -> Vec<DVector<Complex64>> {
    (0..m.ncols()).map(|c| m.column(c).into_owned()).collect()
}
