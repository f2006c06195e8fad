#![allow(dead_code)]

use arflow::linalg::{Matrix, C64};
use arflow::oracles::corpus::{self, CorpusMatrix};
use nalgebra::{DMatrix, DVector};

pub const CORPUS_SIZE: usize = 200;

pub fn corpus() -> Vec<CorpusMatrix> {
    corpus::generate(corpus::seed_from_env(), CORPUS_SIZE)
}

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn cvec(v: &DVector<f64>) -> DVector<C64> {
    v.map(c)
}

pub fn fro(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn dist(a: &Matrix, b: &DMatrix<C64>) -> f64 {
    fro(&(a.as_complex() - b))
}

pub fn real_matrix(rows: usize, data: &[f64]) -> Matrix {
    Matrix::from_real(&DMatrix::from_row_slice(rows, rows, data)).unwrap()
}

pub fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {id} [{}] {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}
