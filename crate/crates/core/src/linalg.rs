//! Exact linear algebra over the rationals.
//!
//! Elimination runs on primitive integer rows (fraction-free): a row is
//! reduced against a pivot row by `r <- (p/g) r - (a/g) P` and its content is
//! divided out afterwards, so entries stay small. Rational vectors are only
//! formed at the end, when a reduced row echelon basis is requested.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::Rational;

/// Sparse integer row: `(column, entry)` pairs, columns increasing, entries
/// nonzero.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Clears denominators and content; the first entry is made positive.
pub fn primitive_row(v: &[Rational]) -> SparseRow {
    let nz: Vec<(usize, &Rational)> = v.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
    let lcm = nz.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let mut row: SparseRow = nz.into_iter().map(|(i, c)| (i, c.numer() * (&lcm / c.denom()))).collect();
    make_primitive(&mut row);
    row
}

/// Same as [`primitive_row`] for a sparse rational input.
pub fn primitive_sparse(v: &[(usize, Rational)]) -> SparseRow {
    let lcm = v.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let mut row: SparseRow = v
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (*i, c.numer() * (&lcm / c.denom())))
        .collect();
    row.sort_by_key(|(i, _)| *i);
    make_primitive(&mut row);
    row
}

fn make_primitive(row: &mut SparseRow) {
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, a) in row.iter() {
        g = g.gcd(a);
        if g.is_one() {
            break;
        }
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, a) in row.iter_mut() {
            *a /= &g;
        }
    }
}

/// `row <- (p/g) row - (a/g) pivot`, where `a` is the entry of `row` in the
/// pivot column and `p` the pivot entry.
fn eliminate(row: &SparseRow, a: &BigInt, pivot: &SparseRow, p: &BigInt) -> SparseRow {
    let g = a.gcd(p);
    let s = p / &g;
    let t = a / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map(|x| x.0).unwrap_or(usize::MAX);
        let cj = pivot.get(j).map(|x| x.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push((ci, &s * &row[i].1));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(&t * &pivot[j].1)));
            j += 1;
        } else {
            let v = &s * &row[i].1 - &t * &pivot[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    make_primitive(&mut out);
    out
}

fn entry(row: &SparseRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |x| x.0).ok().map(|k| &row[k].1)
}

/// Incremental row echelon form.
#[derive(Debug, Clone)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<SparseRow>,
    pivots: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new(), pivots: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` until its leading column is not a pivot column.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        make_primitive(&mut row);
        while let Some((c, a)) = row.first().cloned() {
            match self.pivots.get(&c) {
                None => break,
                Some(&k) => {
                    let piv = &self.rows[k];
                    row = eliminate(&row, &a, piv, &piv[0].1);
                }
            }
        }
        row
    }

    /// Adds a row; returns whether it was independent of the rows so far.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        debug_assert!(row.iter().all(|(c, _)| *c < self.ncols));
        let r = self.reduce(row);
        match r.first() {
            None => false,
            Some(&(c, _)) => {
                self.pivots.insert(c, self.rows.len());
                self.rows.push(r);
                true
            }
        }
    }

    pub fn insert_rational(&mut self, v: &[Rational]) -> bool {
        self.insert(primitive_row(v))
    }

    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// Reduced row echelon form: integer rows ordered by pivot column, each
    /// zero in every other pivot column.
    fn reduced_integer_rows(&self) -> Vec<SparseRow> {
        let order: Vec<usize> = self.pivots.values().copied().collect();
        let mut rows: Vec<SparseRow> = order.iter().map(|&k| self.rows[k].clone()).collect();
        let cols: Vec<usize> = self.pivots.keys().copied().collect();
        for i in (0..rows.len()).rev() {
            for j in i + 1..rows.len() {
                if let Some(a) = entry(&rows[i], cols[j]).cloned() {
                    let p = rows[j][0].1.clone();
                    rows[i] = eliminate(&rows[i], &a, &rows[j], &p);
                }
            }
        }
        rows
    }

    /// Reduced row echelon basis with unit pivots, ordered by pivot column.
    pub fn rref(&self) -> Vec<Vec<(usize, Rational)>> {
        self.reduced_integer_rows()
            .into_iter()
            .map(|row| {
                let lead = row[0].1.clone();
                row.into_iter().map(|(c, a)| (c, Rational::new(a, lead.clone()))).collect()
            })
            .collect()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Basis of `{x : M x = 0}` where the inserted rows are the rows of `M`.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let rref = self.rref();
        let pivots: Vec<usize> = rref.iter().map(|r| r[0].0).collect();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.ncols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        // column f of the rref, as (row, value) pairs
        let mut by_col: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
        for (i, r) in rref.iter().enumerate() {
            for (c, a) in r.iter().skip(1) {
                by_col.entry(*c).or_default().push((i, a.clone()));
            }
        }
        (0..self.ncols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![Rational::zero(); self.ncols];
                v[f] = Rational::one();
                if let Some(entries) = by_col.get(&f) {
                    for (i, a) in entries {
                        v[pivots[*i]] = -a.clone();
                    }
                }
                v
            })
            .collect()
    }
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert_rational(r);
    }
    e.rank()
}

/// Kernel of the map whose matrix has the given sparse rows.
///
/// Rows spanning the row space are first selected modulo a large prime; the
/// exact kernel of the selected rows is then checked against every row. A
/// failed check (an unlucky prime) falls back to exact elimination of all
/// rows, so the result never depends on the modular pass.
pub fn kernel_of_rows(rows: impl IntoIterator<Item = SparseRow>, ncols: usize) -> Vec<Vec<Rational>> {
    let rows: Vec<SparseRow> = rows.into_iter().collect();
    let selected = modular_row_basis(&rows, ncols);
    let mut e = Echelon::new(ncols);
    for &k in &selected {
        e.insert(rows[k].clone());
    }
    let kernel = e.kernel();
    if annihilates(&rows, &kernel) {
        return kernel;
    }
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r);
    }
    e.kernel()
}

const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn to_mod(a: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let r = a.mod_floor(&p);
    r.iter_u64_digits().next().unwrap_or(0)
}

/// Indices of rows that are independent modulo the prime, greedily in order.
fn modular_row_basis(rows: &[SparseRow], ncols: usize) -> Vec<usize> {
    // pivot column -> normalized dense row (pivot entry 1)
    let mut basis: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    let mut selected = Vec::new();
    for (k, row) in rows.iter().enumerate() {
        let mut v = vec![0u64; ncols];
        for (c, a) in row {
            v[*c] = to_mod(a);
        }
        for (&pc, b) in basis.iter() {
            let f = v[pc];
            if f == 0 {
                continue;
            }
            for c in pc..ncols {
                if b[c] != 0 {
                    v[c] = (v[c] + PRIME - mulmod(f, b[c])) % PRIME;
                }
            }
        }
        if let Some(pc) = v.iter().position(|&x| x != 0) {
            let inv = powmod(v[pc], PRIME - 2);
            for x in v.iter_mut().skip(pc) {
                *x = mulmod(*x, inv);
            }
            basis.insert(pc, v);
            selected.push(k);
            if selected.len() == ncols {
                break;
            }
        }
    }
    selected
}

/// Exact check that every row is orthogonal to every kernel vector.
fn annihilates(rows: &[SparseRow], kernel: &[Vec<Rational>]) -> bool {
    let ints: Vec<Vec<BigInt>> = kernel
        .iter()
        .map(|v| {
            let lcm = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            v.iter().map(|c| c.numer() * (&lcm / c.denom())).collect()
        })
        .collect();
    rows.iter().all(|row| {
        ints.iter().all(|v| {
            let mut s = BigInt::zero();
            for (c, a) in row {
                if !v[*c].is_zero() {
                    s += a * &v[*c];
                }
            }
            s.is_zero()
        })
    })
}

/// Sparse rational matrix stored by columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    nrows: usize,
    ncols: usize,
    cols: Vec<Vec<(usize, Rational)>>,
}

impl RatMatrix {
    /// Columns are sparse `(row, value)` lists; zeros are dropped.
    pub fn from_columns(nrows: usize, cols: Vec<Vec<(usize, Rational)>>) -> Self {
        let cols: Vec<Vec<(usize, Rational)>> = cols
            .into_iter()
            .map(|mut c| {
                c.retain(|(_, a)| !a.is_zero());
                c.sort_by_key(|(r, _)| *r);
                assert!(c.iter().all(|(r, _)| *r < nrows), "row index out of range");
                c
            })
            .collect();
        RatMatrix { nrows, ncols: cols.len(), cols }
    }

    pub fn from_dense_rows(rows: &[Vec<Rational>], ncols: usize) -> Self {
        let mut cols = vec![Vec::new(); ncols];
        for (r, row) in rows.iter().enumerate() {
            for (c, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    cols[c].push((r, a.clone()));
                }
            }
        }
        RatMatrix { nrows: rows.len(), ncols, cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn column(&self, c: usize) -> &[(usize, Rational)] {
        &self.cols[c]
    }

    /// Primitive integer rows.
    pub fn rows(&self) -> Vec<SparseRow> {
        let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, a) in col {
                rows[*r].push((c, a.clone()));
            }
        }
        rows.iter().map(|r| primitive_sparse(r)).filter(|r| !r.is_empty()).collect()
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut cols: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, a) in col {
                cols[*r].push((c, a.clone()));
            }
        }
        RatMatrix { nrows: self.ncols, ncols: self.nrows, cols }
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.ncols);
        for r in self.rows() {
            e.insert(r);
        }
        e.rank()
    }

    pub fn kernel(&self) -> Subspace {
        let k = kernel_of_rows(self.rows(), self.ncols);
        Subspace::span(self.ncols, k.iter())
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.ncols);
        let mut out = vec![Rational::zero(); self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            if v[c].is_zero() {
                continue;
            }
            for (r, a) in col {
                out[*r] += a * &v[c];
            }
        }
        out
    }
}

/// A subspace of `Q^n`, stored as its reduced row echelon basis. Two
/// subspaces are equal exactly when their stored bases are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<(usize, Rational)>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn span<'a>(ambient: usize, vectors: impl IntoIterator<Item = &'a Vec<Rational>>) -> Self {
        let mut e = Echelon::new(ambient);
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length differs from ambient dimension");
            e.insert_rational(v);
        }
        Self::from_echelon(&e)
    }

    pub fn from_echelon(e: &Echelon) -> Self {
        Subspace { ambient: e.ncols(), basis: e.rref() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Canonical basis vectors, densified.
    pub fn basis(&self) -> Vec<Vec<Rational>> {
        self.basis
            .iter()
            .map(|r| {
                let mut v = vec![Rational::zero(); self.ambient];
                for (c, a) in r {
                    v[*c] = a.clone();
                }
                v
            })
            .collect()
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::AmbientMismatch(self.ambient, v.len()));
        }
        let mut w = v.to_vec();
        for r in &self.basis {
            let (c, _) = r[0];
            if w[c].is_zero() {
                continue;
            }
            let f = w[c].clone();
            for (k, a) in r {
                w[*k] -= &f * a;
            }
        }
        Ok(w.iter().all(Zero::is_zero))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        for v in self.basis() {
            if !other.contains(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        let vs: Vec<Vec<Rational>> = self.basis().into_iter().chain(other.basis()).collect();
        Ok(Subspace::span(self.ambient, vs.iter()))
    }
}
