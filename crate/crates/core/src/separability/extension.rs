use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{lp_feasible, FeasibilityResult, Matrix};
use crate::rational::{self, Rational};
use crate::rule::JointChoiceRule;
use crate::space::{decode_row_major, encode_row_major, ChoiceSpace};

/// Linear system `M x = b, x ≥ 0` over the joint vector of the extended rule
/// (DM 0 followed by `k` replicas of DM 1).
#[derive(Debug, Clone)]
pub struct ExtensionSystem {
    pub space: ChoiceSpace,
    pub matrix: Matrix,
    pub rhs: Vec<Rational>,
}

struct Rows {
    rows: Vec<BTreeMap<usize, i64>>,
    rhs: Vec<Rational>,
}

impl Rows {
    fn push(&mut self, entries: impl IntoIterator<Item = (usize, i64)>, rhs: Rational) {
        let mut row = BTreeMap::new();
        for (c, v) in entries {
            *row.entry(c).or_insert(0) += v;
        }
        row.retain(|_, v| *v != 0);
        self.rows.push(row);
        self.rhs.push(rhs);
    }
}

/// Builds the extension LP. Replica `j` (coordinate `j`, 1 ≤ j ≤ k) yields a virtual
/// two-DM rule by summing out every other replica's choices with that replica's
/// menu held at its first menu; under the imposed marginality the choice of held
/// menu is immaterial. With `on_average` the mean of the `k` virtual rules must equal
/// the rule, otherwise each of them must.
pub fn extension_system(rule: &JointChoiceRule, k: usize, on_average: bool) -> Result<ExtensionSystem> {
    let space = rule.space();
    if space.dm_count() != 2 {
        return Err(Error::NotTwoDms(space.dm_count()));
    }
    if k == 0 {
        return Err(Error::BadParameter("k must be at least 1".into()));
    }
    let mut dms = vec![space.dm(0).clone()];
    dms.extend(std::iter::repeat(space.dm(1).clone()).take(k));
    let ext = ChoiceSpace::from_dms(dms);
    let coords = k + 1;
    let radices: Vec<usize> = (0..coords).map(|c| ext.pair_count(c)).collect();
    let n: usize = radices.iter().product();
    let mut rows = Rows {
        rows: Vec::new(),
        rhs: Vec::new(),
    };

    // Adding up per extended menu path.
    for path in ext.menu_paths() {
        let entries: Vec<(usize, i64)> = ext
            .choice_paths(&path)
            .iter()
            .map(|cp| (ext.joint_index(&path, cp), 1))
            .collect();
        rows.push(entries, rational::one());
    }

    // Marginality for every coordinate: menu j against menu 0.
    for t in 0..coords {
        let others: Vec<usize> = (0..coords).filter(|&s| s != t).collect();
        let other_radices: Vec<usize> = others.iter().map(|&s| radices[s]).collect();
        let combos: usize = other_radices.iter().product();
        for combo in 0..combos {
            let digits = decode_row_major(combo, &other_radices);
            let mut pairs = vec![0usize; coords];
            for (&s, &d) in others.iter().zip(&digits) {
                pairs[s] = d;
            }
            let block = |menu: usize, sign: i64, pairs: &mut Vec<usize>| {
                (0..ext.menu_size(t, menu))
                    .map(|i| {
                        pairs[t] = ext.pair_index(t, menu, i);
                        (encode_row_major(pairs, &radices), sign)
                    })
                    .collect::<Vec<_>>()
            };
            for j in 1..ext.menu_count(t) {
                let mut entries = block(j, 1, &mut pairs);
                entries.extend(block(0, -1, &mut pairs));
                rows.push(entries, rational::zero());
            }
        }
    }

    // Virtual rules.
    let rho = rule.joint_vector();
    let p1 = space.pair_count(0);
    let p2 = space.pair_count(1);
    let first_menu: Vec<usize> = (0..space.menu_size(1, 0))
        .map(|i| space.pair_index(1, 0, i))
        .collect();
    let virtual_entries = |j: usize, a: usize, b: usize| -> Vec<(usize, i64)> {
        // Replicas other than j range over the first menu's pairs.
        let rest: Vec<usize> = (1..coords).filter(|&s| s != j).collect();
        let combos = first_menu.len().pow(rest.len() as u32);
        let rest_radices = vec![first_menu.len(); rest.len()];
        (0..combos)
            .map(|combo| {
                let digits = decode_row_major(combo, &rest_radices);
                let mut pairs = vec![0usize; coords];
                pairs[0] = a;
                pairs[j] = b;
                for (&s, &d) in rest.iter().zip(&digits) {
                    pairs[s] = first_menu[d];
                }
                (encode_row_major(&pairs, &radices), 1)
            })
            .collect()
    };
    for a in 0..p1 {
        for b in 0..p2 {
            let target = &rho[a * p2 + b];
            if on_average {
                let entries: Vec<(usize, i64)> =
                    (1..coords).flat_map(|j| virtual_entries(j, a, b)).collect();
                rows.push(entries, rational::int(k as i64) * target);
            } else {
                for j in 1..coords {
                    rows.push(virtual_entries(j, a, b), target.clone());
                }
            }
        }
    }

    let mut matrix = Matrix::zeros(rows.rows.len(), n);
    for (r, row) in rows.rows.iter().enumerate() {
        for (&c, &v) in row {
            matrix.set(r, c, rational::int(v));
        }
    }
    Ok(ExtensionSystem {
        space: ext,
        matrix,
        rhs: rows.rhs,
    })
}

/// Whether the rule extends to `k` replicas of DM 1 (see [`extension_system`]).
///
/// The system is invariant under permuting replicas, so averaging a solution over
/// those permutations gives another solution. The LP is therefore solved over one
/// variable per orbit of extended pairs. A reduced witness spreads to the full
/// vector. A reduced Farkas vector `y` is spread evenly over the rows that collapse
/// to each reduced row; the result is permutation invariant, so `yᵀA` is constant
/// on every orbit and equals the reduced value there. Both are re-verified against
/// the full system.
pub fn check_k_marginalizable(
    rule: &JointChoiceRule,
    k: usize,
    on_average: bool,
) -> Result<FeasibilityResult> {
    let sys = extension_system(rule, k, on_average)?;
    let result = solve_reduced(&sys)?;
    if !result.verify(&sys.matrix, &sys.rhs) {
        return Err(Error::CertificateCheck(
            "lifted extension certificate does not re-verify".into(),
        ));
    }
    Ok(result)
}

/// Orbit id of every column under permutations of the replicas.
fn column_orbits(sys: &ExtensionSystem) -> (Vec<usize>, usize) {
    let coords = sys.space.dm_count();
    let radices: Vec<usize> = (0..coords).map(|c| sys.space.pair_count(c)).collect();
    let mut ids: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let keys: Vec<Vec<usize>> = (0..sys.matrix.cols())
        .map(|c| {
            let mut digits = decode_row_major(c, &radices);
            digits[1..].sort_unstable();
            digits
        })
        .collect();
    for key in &keys {
        let next = ids.len();
        ids.entry(key.clone()).or_insert(next);
    }
    let orbit = keys.iter().map(|k| ids[k]).collect();
    (orbit, ids.len())
}

fn solve_reduced(sys: &ExtensionSystem) -> Result<FeasibilityResult> {
    let (orbit, n_orbits) = column_orbits(sys);
    // Column sums over each orbit, then identical rows merged.
    let mut groups: BTreeMap<(Vec<Rational>, Rational), Vec<usize>> = BTreeMap::new();
    let mut order: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for r in 0..sys.matrix.rows() {
        let mut row = vec![rational::zero(); n_orbits];
        for (c, x) in sys.matrix.row(r).iter().enumerate() {
            if !x.is_zero() {
                row[orbit[c]] += x;
            }
        }
        let key = (row, sys.rhs[r].clone());
        let members = groups.entry(key.clone()).or_default();
        if members.is_empty() {
            order.push(key);
        }
        members.push(r);
    }
    let rows: Vec<Vec<Rational>> = order.iter().map(|(row, _)| row.clone()).collect();
    let rhs: Vec<Rational> = order.iter().map(|(_, b)| b.clone()).collect();
    let reduced = Matrix::from_rows(rows, n_orbits)?;
    Ok(match lp_feasible(&reduced, &rhs)? {
        FeasibilityResult::Feasible { witness } => FeasibilityResult::Feasible {
            witness: orbit.iter().map(|&o| witness[o].clone()).collect(),
        },
        FeasibilityResult::Infeasible { farkas } => {
            let mut y = vec![rational::zero(); sys.matrix.rows()];
            for (key, yr) in order.iter().zip(&farkas) {
                let members = &groups[key];
                let share = yr / rational::int(members.len() as i64);
                for &r in members {
                    y[r] = share.clone();
                }
            }
            FeasibilityResult::Infeasible { farkas: y }
        }
    })
}
