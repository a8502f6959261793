//! Truncated differential forms on a noncommutative torus: the span of
//! `u^r η_I` with `|r|_∞ ≤ R`, `|I| ≤ D_max`, where `η_k = u_k⁻¹du_k` are
//! central one-forms and `d(u^r) = u^r Σ_k r_k η_k`.

use std::collections::HashMap;

use super::{sup_norm, TorusPresentation};
use crate::algebra::{Algebra, AlgebraBuilder};
use crate::error::Result;
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

#[derive(Clone, Debug)]
pub struct TorusForms<S: Scalar> {
    pub algebra: Algebra<S>,
    pub presentation: TorusPresentation,
    index: HashMap<(Vec<i64>, u32), usize>,
    labels: Vec<(Vec<i64>, u32)>,
}

impl<S: Scalar> TorusForms<S> {
    /// Basis index of `u^r η_I` for the bitmask `I`.
    pub fn index_of(&self, r: &[i64], mask: u32) -> Option<usize> {
        self.index.get(&(r.to_vec(), mask)).copied()
    }

    pub fn weyl(&self, r: &[i64]) -> Option<usize> {
        self.index_of(r, 0)
    }

    /// `η_k`, zero-based.
    pub fn eta(&self, k: usize) -> Option<usize> {
        self.index_of(&vec![0; self.presentation.n], 1 << k)
    }

    /// `(r, I)` of a basis index.
    pub fn label(&self, i: usize) -> (&[i64], u32) {
        let (r, m) = &self.labels[i];
        (r, *m)
    }
}

fn all_exponents(n: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| (-radius..=radius).map(move |x| [v.clone(), vec![x]].concat()))
            .collect();
    }
    out
}

fn name(r: &[i64], mask: u32) -> String {
    let weyl = if r.iter().all(|&x| x == 0) {
        String::new()
    } else {
        let parts: Vec<String> = r.iter().map(|x| x.to_string()).collect();
        format!("u({})", parts.join(","))
    };
    let etas: String = (0..32)
        .filter(|k| mask & (1 << k) != 0)
        .map(|k| format!("η{}", k + 1))
        .collect();
    match (weyl.is_empty(), etas.is_empty()) {
        (true, true) => "1".into(),
        (true, false) => etas,
        (false, true) => weyl,
        (false, false) => format!("{weyl}·{etas}"),
    }
}

/// `(−1)^{#{(i, j) ∈ I×J : i > j}}` for `η_I η_J`.
fn wedge_negative(i: u32, j: u32) -> bool {
    let mut count = 0;
    for b in 0..32 {
        if j & (1 << b) != 0 {
            count += (i >> (b + 1)).count_ones();
        }
    }
    count % 2 == 1
}

pub fn torus_forms<S: Scalar>(t: &TorusPresentation, max_degree: usize) -> Result<TorusForms<S>> {
    let n = t.n;
    let top = max_degree.min(n);
    let exps = all_exponents(n, t.radius);
    let mut b = AlgebraBuilder::<S>::new(max_degree);
    b.set_truncation(t.truncation);
    b.set_irrational_generators(t.irrational_generators.clone(), t.bindings.clone());
    let mut index = HashMap::new();
    let mut labels = Vec::new();
    for p in 0..=top {
        for r in &exps {
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize == p {
                    let i = b.add_basis(name(r, mask), p)?;
                    index.insert((r.clone(), mask), i);
                    labels.push((r.clone(), mask));
                }
            }
        }
    }
    let sign = |neg: bool| if neg { S::one().neg() } else { S::one() };
    for (i, (r, mi)) in labels.iter().enumerate() {
        for (j, (s, mj)) in labels.iter().enumerate() {
            if mi & mj != 0 {
                continue;
            }
            let sum: Vec<i64> = r.iter().zip(s).map(|(x, y)| x + y).collect();
            let degree = (mi | mj).count_ones() as usize;
            if sup_norm(&sum) > t.radius || degree > max_degree {
                b.set_product_out_of_window(i, j);
                continue;
            }
            let c =
                S::from_phase(&t.cocycle(r, s), &t.bindings).mul(&sign(wedge_negative(*mi, *mj)));
            b.set_product(i, j, SparseVec::single(index[&(sum, mi | mj)], c));
        }
        // d(u^r η_I) = Σ_k r_k u^r η_k η_I
        let mut d = SparseVec::new();
        let mut out_of_window = false;
        for k in 0..n {
            if r[k] == 0 || mi & (1 << k) != 0 {
                continue;
            }
            let m = mi | (1 << k);
            match index.get(&(r.clone(), m)) {
                Some(&target) => {
                    let neg = (mi & ((1 << k) - 1)).count_ones() % 2 == 1;
                    d.add_term(target, &S::from_i64(r[k]).mul(&sign(neg)));
                }
                None => out_of_window = true,
            }
        }
        b.set_differential(i, (!out_of_window).then_some(d));
    }
    // (u^r η_I)* = (−1)^{|I|} u^{−r} η_I
    let star = labels
        .iter()
        .map(|(r, m)| {
            let neg: Vec<i64> = r.iter().map(|x| -x).collect();
            (index[&(neg, *m)], sign(m.count_ones() % 2 == 1))
        })
        .collect();
    b.set_star(Some(star));
    b.set_unit(SparseVec::unit(index[&(vec![0; n], 0)]));
    let algebra = b.build()?;
    Ok(TorusForms {
        algebra,
        presentation: t.clone(),
        index,
        labels,
    })
}
