//! Double description (Motzkin) for `{z : H z ≥ 0}` with explicit lineality.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{self, Rational};

/// Generators of a polyhedral cone: `cone(rays) + span(lineality)`.
#[derive(Debug, Clone)]
pub(crate) struct Generators {
    pub rays: Vec<Vec<Rational>>,
    pub lineality: Vec<Vec<Rational>>,
}

#[derive(Clone)]
struct RowSet(Vec<u64>);

impl RowSet {
    fn new(n: usize) -> Self {
        Self(vec![0; n.div_ceil(64).max(1)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersect(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    v: Vec<Rational>,
    zeros: RowSet,
}

fn axpy(alpha: &Rational, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    y.iter()
        .zip(x)
        .map(|(yi, xi)| {
            if xi.is_zero() {
                yi.clone()
            } else {
                yi + alpha * xi
            }
        })
        .collect()
}

/// Extreme rays (modulo lineality) and a lineality basis of `{z : h z ≥ 0}`.
/// Fails with [`Error::TooLarge`] once the working ray list exceeds `cap`.
pub(crate) fn cone_generators(h: &Matrix, cap: usize) -> Result<Generators> {
    let (m, n) = (h.rows(), h.cols());
    let mut lineality: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut e = vec![Rational::zero(); n];
            e[i] = rational::one();
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for row in 0..m {
        let hr = h.row(row);
        if hr.iter().all(Zero::is_zero) {
            for r in &mut rays {
                r.zeros.insert(row);
            }
            continue;
        }
        let cut = lineality
            .iter()
            .position(|l| !rational::dot(hr, l).is_zero());
        if let Some(k) = cut {
            let mut pivot = lineality.swap_remove(k);
            let mut s = rational::dot(hr, &pivot);
            if s.is_negative() {
                pivot = pivot.iter().map(|x| -x).collect();
                s = -s;
            }
            for l in &mut lineality {
                let f = -rational::dot(hr, l) / &s;
                if !f.is_zero() {
                    *l = rational::primitive(&axpy(&f, &pivot, l));
                }
            }
            for r in &mut rays {
                let f = -rational::dot(hr, &r.v) / &s;
                if !f.is_zero() {
                    r.v = rational::primitive(&axpy(&f, &pivot, &r.v));
                }
                r.zeros.insert(row);
            }
            // the pivot is zero on every earlier row, being a lineality direction there
            let mut zeros = RowSet::new(m);
            for earlier in 0..row {
                zeros.insert(earlier);
            }
            rays.push(Ray {
                v: rational::primitive(&pivot),
                zeros,
            });
        } else {
            let values: Vec<Rational> = rays.iter().map(|r| rational::dot(hr, &r.v)).collect();
            let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
            let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
            let mut created = Vec::new();
            for &p in &pos {
                for &q in &neg {
                    let common = rays[p].zeros.intersect(&rays[q].zeros);
                    let adjacent = (0..rays.len())
                        .filter(|&r| r != p && r != q)
                        .all(|r| !common.is_subset(&rays[r].zeros));
                    if !adjacent {
                        continue;
                    }
                    // values[p] > 0 > values[q]: both coefficients positive
                    let combo: Vec<Rational> = rays[q]
                        .v
                        .iter()
                        .zip(&rays[p].v)
                        .map(|(vq, vp)| &values[p] * vq - &values[q] * vp)
                        .collect();
                    let mut zeros = common;
                    zeros.insert(row);
                    created.push(Ray {
                        v: rational::primitive(&combo),
                        zeros,
                    });
                }
            }
            let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
            for (i, mut r) in rays.into_iter().enumerate() {
                if values[i].is_negative() {
                    continue;
                }
                if values[i].is_zero() {
                    r.zeros.insert(row);
                }
                kept.push(r);
            }
            kept.extend(created);
            rays = kept;
        }
        if rays.len() > cap {
            return Err(Error::TooLarge { cap });
        }
    }
    Ok(Generators {
        rays: rays.into_iter().map(|r| r.v).collect(),
        lineality,
    })
}
