use std::fmt;

use crate::error::{Error, Result};
use crate::exactlin::scalar::Scalar;

/// Column vector with exact entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vect {
    entries: Vec<Scalar>,
}

impl Vect {
    pub fn new(entries: Vec<Scalar>) -> Self {
        Vect { entries }
    }

    pub fn zero(dim: usize) -> Self {
        Vect::new(vec![Scalar::zero(); dim])
    }

    /// Parses each entry with the scalar grammar.
    pub fn parse(entries: &[&str]) -> Result<Self> {
        entries
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<_>>>()
            .map(Vect::new)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, s: &Scalar) -> Vect {
        Vect::new(self.entries.iter().map(|e| e * s).collect())
    }

    pub fn add(&self, other: &Vect) -> Result<Vect> {
        check_dim_eq(self.dim(), other.dim())?;
        Ok(Vect::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(x, y)| x + y)
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Vect) -> Result<Vect> {
        check_dim_eq(self.dim(), other.dim())?;
        Ok(Vect::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(x, y)| x - y)
                .collect(),
        ))
    }
}

impl fmt::Debug for Vect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vect[")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

fn check_dim_eq(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Inner product, conjugate-linear in the first argument.
pub fn inner(u: &Vect, v: &Vect) -> Result<Scalar> {
    check_dim_eq(u.dim(), v.dim())?;
    let mut acc = Scalar::zero();
    for (x, y) in u.entries.iter().zip(&v.entries) {
        acc = &acc + &(&x.conj() * y);
    }
    Ok(acc)
}

/// Dense row-major matrix with exact entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::domain(format!(
                "matrix data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vect {
        Vect::new((0..self.cols).map(|c| self.get(r, c).clone()).collect())
    }

    pub fn col(&self, c: usize) -> Vect {
        Vect::new((0..self.rows).map(|r| self.get(r, c).clone()).collect())
    }

    pub fn from_rows(rows: &[Vect]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vect::dim);
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for r in rows {
            check_dim_eq(ncols, r.dim())?;
            data.extend(r.entries.iter().cloned());
        }
        Mat::new(rows.len(), ncols, data)
    }

    pub fn from_cols(cols: &[Vect]) -> Result<Self> {
        let nrows = cols.first().map_or(0, Vect::dim);
        let mut m = Mat::zero(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            check_dim_eq(nrows, c.dim())?;
            for i in 0..nrows {
                m.set(i, j, c.get(i).clone());
            }
        }
        Ok(m)
    }

    pub fn col_vectors(&self) -> Vec<Vect> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        check_dim_eq(self.rows, other.rows)?;
        check_dim_eq(self.cols, other.cols)?;
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| x + y)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        check_dim_eq(self.rows, other.rows)?;
        check_dim_eq(self.cols, other.cols)?;
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| x - y)
                .collect(),
        })
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        check_dim_eq(self.cols, other.rows)?;
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Scalar::zero();
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &Vect) -> Result<Vect> {
        check_dim_eq(self.cols, v.dim())?;
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                acc = &acc + &(self.get(i, k) * v.get(k));
            }
            out.push(acc);
        }
        Ok(Vect::new(out))
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> Mat {
        let mut out = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Result<Scalar> {
        check_dim_eq(self.rows, self.cols)?;
        let mut acc = Scalar::zero();
        for i in 0..self.rows {
            acc = &acc + self.get(i, i);
        }
        Ok(acc)
    }

    pub fn is_hermitian(&self) -> bool {
        self.rows == self.cols && *self == self.conj_transpose()
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    let tmp = m.get(r, j).clone();
                    m.set(r, j, m.get(p, j).clone());
                    m.set(p, j, tmp);
                }
            }
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in c..m.cols {
                m.set(r, j, m.get(r, j) * &inv);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&factor * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one vector per free column of the reduced
    /// form. Empty when the matrix has full column rank.
    pub fn kernel(&self) -> Vec<Vect> {
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, free);
            }
            out.push(Vect::new(v));
        }
        out
    }

    pub fn inverse(&self) -> Result<Mat> {
        check_dim_eq(self.rows, self.cols)?;
        let n = self.rows;
        let mut aug = Mat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::domain("matrix is singular"));
        }
        let mut out = Mat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Orthogonal projector onto the span of the given vectors, computed as
/// `B (B* B)^{-1} B*` so no normalization roots are needed. The vectors must
/// be linearly independent.
pub fn projector_onto(basis: &[Vect]) -> Result<Mat> {
    if basis.is_empty() {
        return Err(Error::DependentBasis);
    }
    let b = Mat::from_cols(basis)?;
    let bstar = b.conj_transpose();
    let gram = bstar.mul(&b)?;
    let gram_inv = gram.inverse().map_err(|_| Error::DependentBasis)?;
    b.mul(&gram_inv)?.mul(&bstar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sc(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    fn v(entries: &[&str]) -> Vect {
        Vect::parse(entries).unwrap()
    }

    fn m(rows: &[&[&str]]) -> Mat {
        Mat::from_rows(&rows.iter().map(|r| v(r)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_argument() {
        let u = v(&["i", "0"]);
        let w = v(&["1", "0"]);
        assert_eq!(inner(&u, &w).unwrap(), sc("-i"));
        assert_eq!(inner(&w, &u).unwrap(), sc("i"));
    }

    #[test]
    fn inner_of_iq_vector_with_itself() {
        let u = v(&["1", "i"]);
        assert_eq!(inner(&u, &u).unwrap(), sc("2"));
    }

    #[test]
    fn inner_rejects_mismatched_dims() {
        assert!(inner(&v(&["1"]), &v(&["1", "0"])).is_err());
    }

    #[test]
    fn kernel_of_row_sums() {
        let k = m(&[&["1", "1"]]).kernel();
        assert_eq!(k.len(), 1);
        // Proportional to (1, -1).
        let ratio = k[0].get(0).div(k[0].get(1)).unwrap();
        assert_eq!(ratio, sc("-1"));
    }

    #[test]
    fn kernel_of_full_rank_matrix_is_empty() {
        assert!(m(&[&["1", "0"], &["0", "1"]]).kernel().is_empty());
    }

    #[test]
    fn projector_onto_diagonal_ray() {
        let p = projector_onto(&[v(&["1", "1"])]).unwrap();
        assert_eq!(p, m(&[&["1/2", "1/2"], &["1/2", "1/2"]]));
    }

    #[test]
    fn projector_onto_circular_ray() {
        let p = projector_onto(&[v(&["1", "i"])]).unwrap();
        assert_eq!(p, m(&[&["1/2", "-1/2i"], &["1/2i", "1/2"]]));
    }

    #[test]
    fn projector_rejects_dependent_vectors() {
        let r = projector_onto(&[v(&["1", "1"]), v(&["2", "2"])]);
        assert_eq!(r, Err(Error::DependentBasis));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&["1", "r2"], &["i", "2"]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Mat::identity(2));
        assert_eq!(inv.mul(&a).unwrap(), Mat::identity(2));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        assert!(m(&[&["1", "1"], &["1", "1"]]).inverse().is_err());
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (-3i64..=3, -2i64..=2, -2i64..=2).prop_map(|(a, b, c)| {
            &(&Scalar::from_int(a) + &(&Scalar::from_int(b) * &Scalar::rt2()))
                + &(&Scalar::from_int(c) * &Scalar::i())
        })
    }

    fn arb_mat(rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
        proptest::collection::vec(arb_scalar(), rows * cols)
            .prop_map(move |data| Mat::new(rows, cols, data).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn rank_plus_nullity_is_column_count(mat in arb_mat(3, 4)) {
            prop_assert_eq!(mat.rank() + mat.kernel().len(), 4);
        }

        #[test]
        fn kernel_vectors_are_annihilated(mat in arb_mat(3, 4)) {
            for k in mat.kernel() {
                prop_assert!(mat.mul_vec(&k).unwrap().is_zero());
            }
        }

        #[test]
        fn self_inner_is_real_nonnegative_and_definite(
            entries in proptest::collection::vec(arb_scalar(), 3)
        ) {
            let u = Vect::new(entries);
            let n = inner(&u, &u).unwrap();
            prop_assert!(n.is_real());
            prop_assert!(n.real_sign().unwrap() >= 0);
            prop_assert_eq!(n.real_sign().unwrap() == 0, u.is_zero());
        }

        #[test]
        fn projector_laws(cols in proptest::collection::vec(
            proptest::collection::vec(arb_scalar(), 3), 1..=2
        )) {
            let vecs: Vec<Vect> = cols.into_iter().map(Vect::new).collect();
            let b = Mat::from_cols(&vecs).unwrap();
            prop_assume!(b.rank() == vecs.len());
            let p = projector_onto(&vecs).unwrap();
            prop_assert_eq!(p.mul(&p).unwrap(), p.clone());
            prop_assert!(p.is_hermitian());
            prop_assert_eq!(p.trace().unwrap(), Scalar::from_int(vecs.len() as i64));
            for v in &vecs {
                prop_assert_eq!(p.mul_vec(v).unwrap(), v.clone());
            }
        }
    }
}
