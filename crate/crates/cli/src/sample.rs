use anyhow::{Context, Result};
use isobound::pairing::{
    configuration_vector, exact_expansion, local_search_expansion, members, sample_pairing,
    ConfigurationVector, ScoreOrder, EXACT_LIMIT,
};
use serde::{Deserialize, Serialize};

use crate::{SampleArgs, Status};

#[derive(Debug, Serialize, Deserialize)]
pub struct SampleReport {
    pub n: usize,
    pub delta: usize,
    pub seed: u64,
    /// `"exact"` or `"local_search"`.
    pub mode: String,
    pub expansion: f64,
    pub witness: Vec<usize>,
    pub configuration: ConfigurationVector,
    /// Improving moves made by the local search.
    pub moves: Option<usize>,
}

pub fn run(args: &SampleArgs) -> Result<Status> {
    let graph = sample_pairing(args.n, args.delta, args.seed)?;
    let exact = args.exact || (!args.local_search && args.n <= EXACT_LIMIT);
    let (mode, expansion, witness, moves) = if exact {
        let (iota, witness) = exact_expansion(&graph)?;
        ("exact", iota, witness, None)
    } else {
        // Start from the half of the vertices with the lowest scores.
        let order = ScoreOrder::random(args.n, args.seed);
        let start: Vec<bool> = (0..args.n)
            .map(|v| 2 * order.value(v) <= args.n as u64)
            .collect();
        let out = local_search_expansion(&graph, &order, &start)?;
        (
            "local_search",
            out.expansion,
            out.subset,
            Some(out.moves.len()),
        )
    };
    if let Some(path) = &args.emit {
        std::fs::write(path, graph.to_edge_list())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let report = SampleReport {
        n: args.n,
        delta: args.delta,
        seed: args.seed,
        mode: mode.to_string(),
        expansion,
        configuration: configuration_vector(&graph, &witness),
        witness: members(&witness),
        moves,
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("iota {:.6} ({mode})", report.expansion);
        println!("witness {:?}", report.witness);
        println!("s {:?}", report.configuration.s);
        println!("s_bar {:?}", report.configuration.s_bar);
        println!(
            "cut {}  |S| {}",
            report.configuration.c, report.configuration.k
        );
        if let Some(m) = moves {
            println!("moves {m}");
        }
    }
    Ok(Status::Success)
}
