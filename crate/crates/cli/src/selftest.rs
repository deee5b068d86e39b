use rayon::prelude::*;
use sepchoice::corpus::{chsh_corpus, CorpusKind};
use sepchoice::separability::{
    check_chsh, check_k_marginalizable, check_marginality, check_separable, solve_signed_measure,
};

use crate::args::SelftestArgs;
use crate::Failure;

struct Outcome {
    kind: CorpusKind,
    separable: bool,
    chsh_and_marginality: bool,
    extension: bool,
    signed: bool,
    marginality: bool,
}

/// Checks three equivalences on a random corpus: separability against marginality
/// plus CHSH, against the two-replica average extension, and signed solvability
/// against marginality. Items run in parallel; output order is fixed.
pub fn run(a: &SelftestArgs) -> Result<u8, Failure> {
    let items = chsh_corpus(a.seed, a.trials);
    let outcomes: Vec<Outcome> = items
        .par_iter()
        .map(|it| -> sepchoice::Result<Outcome> {
            let marginality = check_marginality(&it.rule).holds();
            Ok(Outcome {
                kind: it.kind,
                separable: check_separable(&it.rule, &[])?.is_feasible(),
                chsh_and_marginality: marginality && check_chsh(&it.rule)?.holds(),
                extension: check_k_marginalizable(&it.rule, 2, true)?.is_feasible(),
                signed: solve_signed_measure(&it.rule)?.is_some(),
                marginality,
            })
        })
        .collect::<sepchoice::Result<_>>()
        .map_err(Failure::internal)?;
    let mut bad = [0usize; 3];
    for o in &outcomes {
        bad[0] += usize::from(o.separable != o.chsh_and_marginality);
        bad[1] += usize::from(o.separable != o.extension);
        bad[2] += usize::from(o.signed != o.marginality);
    }
    let kinds = [
        CorpusKind::Mixture,
        CorpusKind::Table1,
        CorpusKind::Signed,
        CorpusKind::NoisyBox,
        CorpusKind::Signaling,
    ];
    for kind in kinds {
        let of_kind: Vec<&Outcome> = outcomes.iter().filter(|o| o.kind == kind).collect();
        let sep = of_kind.iter().filter(|o| o.separable).count();
        println!("{:?}: {} rules, {} separable", kind, of_kind.len(), sep);
    }
    println!("separable vs marginality and CHSH: {} disagreements", bad[0]);
    println!("separable vs 2-replica average extension: {} disagreements", bad[1]);
    println!("signed solution vs marginality: {} disagreements", bad[2]);
    Ok(if bad.iter().all(|&b| b == 0) { 0 } else { 1 })
}
