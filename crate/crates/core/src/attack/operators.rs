//! Initialization, selection, crossover and mutation.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;

use super::context::{AttackContext, GenePool, Target};
use super::{Chromosome, NodeAttackMode};
use crate::error::Result;

/// Resample limit in crossover step 4.
pub const CROSSOVER_RETRIES: usize = 50;
/// Attempts to find a non-duplicate replacement gene during mutation.
const MUTATION_RETRIES: usize = 32;

/// Builds the initial population of `config.population` chromosomes.
pub fn initialize_population<R: Rng + ?Sized>(
    ctx: &AttackContext<'_>,
    rng: &mut R,
) -> Result<Vec<Chromosome>> {
    let cfg = ctx.config();
    let cap = ctx.max_budget();
    let mut population = Vec::with_capacity(cfg.population);
    for _ in 0..cfg.population {
        let beta = if cfg.fixed_budget {
            cap
        } else {
            rng.gen_range(1..=cap)
        };
        let chromo = match ctx.target() {
            Target::Node { node, home, .. } => node_chromosome(ctx, *node, *home, beta, rng),
            _ => {
                let add = uniform_subset(ctx.add_pool(), beta, rng);
                let del = if ctx.rewiring() {
                    uniform_subset(ctx.del_pool(), beta, rng)
                } else {
                    Vec::new()
                };
                Chromosome::new(add, del)
            }
        };
        population.push(chromo);
    }
    Ok(population)
}

fn uniform_subset<R: Rng + ?Sized>(pool: &GenePool, k: usize, rng: &mut R) -> Vec<usize> {
    sample(rng, pool.len(), k)
        .into_iter()
        .map(|i| pool.genes()[i])
        .collect()
}

/// Target-node heuristic: link `t` into a random foreign community first,
/// moving on to another one when its nodes run out. Rewire mode deletes
/// links from `t` to nodes outside that community, home neighbors first.
fn node_chromosome<R: Rng + ?Sized>(
    ctx: &AttackContext<'_>,
    t: usize,
    home: usize,
    beta: usize,
    rng: &mut R,
) -> Chromosome {
    let graph = ctx.graph();
    let baseline = ctx.baseline();
    let index = ctx.index();
    let mut foreign: Vec<usize> = (0..baseline.community_count())
        .filter(|&c| c != home)
        .collect();
    foreign.shuffle(rng);
    let members = baseline.communities();

    let mut add = Vec::with_capacity(beta);
    let mut first = None;
    for &c in &foreign {
        if add.len() == beta {
            break;
        }
        let mut candidates: Vec<usize> = members[c]
            .iter()
            .filter_map(|&v| index.nonedge_id(t, v))
            .collect();
        candidates.shuffle(rng);
        if first.is_none() && !candidates.is_empty() {
            first = Some(c);
        }
        for g in candidates {
            if add.len() == beta {
                break;
            }
            add.push(g);
        }
    }
    if add.len() < beta {
        // only the home community is left
        let taken: HashSet<usize> = add.iter().copied().collect();
        let mut rest: Vec<usize> = ctx
            .add_pool()
            .genes()
            .iter()
            .copied()
            .filter(|g| !taken.contains(g))
            .collect();
        rest.shuffle(rng);
        add.extend(rest.into_iter().take(beta - add.len()));
    }

    let mut del = Vec::new();
    if ctx.config().node_mode == NodeAttackMode::Rewire {
        let mut home_side = Vec::new();
        let mut elsewhere = Vec::new();
        let mut inside = Vec::new();
        for &v in graph.neighbors(t) {
            let id = graph.edge_position(t, v).expect("neighbor edge");
            let c = baseline.community_of(v);
            if Some(c) == first {
                inside.push(id);
            } else if c == home {
                home_side.push(id);
            } else {
                elsewhere.push(id);
            }
        }
        for group in [&mut home_side, &mut elsewhere, &mut inside] {
            group.shuffle(rng);
            del.extend(group.iter().copied());
        }
        del.truncate(beta);
    }
    Chromosome::new(add, del)
}

/// Roulette-wheel sampling probabilities, uniform when no fitness is
/// positive.
pub fn selection_probabilities(fitness: &[f64]) -> Vec<f64> {
    let total: f64 = fitness.iter().sum();
    if total > 0.0 {
        fitness.iter().map(|f| f / total).collect()
    } else {
        vec![1.0 / fitness.len() as f64; fitness.len()]
    }
}

/// Draws `count` parents with replacement, proportionally to fitness.
pub fn roulette_select<R: Rng + ?Sized>(fitness: &[f64], count: usize, rng: &mut R) -> Vec<usize> {
    let probs = selection_probabilities(fitness);
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in &probs {
        acc += p;
        cumulative.push(acc);
    }
    let last = probs
        .iter()
        .rposition(|&p| p > 0.0)
        .unwrap_or(probs.len() - 1);
    (0..count)
        .map(|_| {
            let x = rng.gen::<f64>() * acc;
            let i = cumulative.partition_point(|&c| c <= x);
            // skip zero-probability slots hit through rounding
            let mut i = i.min(last);
            while probs[i] == 0.0 {
                i += 1;
            }
            i
        })
        .collect()
}

/// Non-equal crossover. Returns the parents unchanged when nothing can be
/// exchanged or no admissible exchange sizes turn up within
/// [`CROSSOVER_RETRIES`] draws.
pub fn crossover_nonequal<R: Rng + ?Sized>(
    a: &Chromosome,
    b: &Chromosome,
    theta: usize,
    rewiring: bool,
    rng: &mut R,
) -> (Chromosome, Chromosome) {
    let unchanged = || (a.clone(), b.clone());
    let xa_add = difference(a.add_genes(), b.add_genes());
    let xb_add = difference(b.add_genes(), a.add_genes());
    let xa_del = difference(a.del_genes(), b.del_genes());
    let xb_del = difference(b.del_genes(), a.del_genes());
    let (max_i, max_j) = if rewiring {
        (
            xa_add.len().min(xa_del.len()),
            xb_add.len().min(xb_del.len()),
        )
    } else {
        (xa_add.len(), xb_add.len())
    };
    if max_i == 0 || max_j == 0 {
        return unchanged();
    }
    let (bi, bj) = (a.budget() as isize, b.budget() as isize);
    let ok = |x: isize| x >= 1 && x <= theta as isize;
    let mut picked = None;
    for _ in 0..CROSSOVER_RETRIES {
        let ri = rng.gen_range(1..=max_i);
        let rj = rng.gen_range(1..=max_j);
        if ok(bi - ri as isize + rj as isize) && ok(bj + ri as isize - rj as isize) {
            picked = Some((ri, rj));
            break;
        }
    }
    let Some((ri, rj)) = picked else {
        return unchanged();
    };

    let give_a_add = pick(&xa_add, ri, rng);
    let give_b_add = pick(&xb_add, rj, rng);
    let (give_a_del, give_b_del) = if rewiring {
        (pick(&xa_del, ri, rng), pick(&xb_del, rj, rng))
    } else {
        (Vec::new(), Vec::new())
    };
    let child_a = Chromosome::new(
        swap(a.add_genes(), &give_a_add, &give_b_add),
        swap(a.del_genes(), &give_a_del, &give_b_del),
    );
    let child_b = Chromosome::new(
        swap(b.add_genes(), &give_b_add, &give_a_add),
        swap(b.del_genes(), &give_b_del, &give_a_del),
    );
    (child_a, child_b)
}

/// Elements of sorted `x` absent from sorted `y`.
fn difference(x: &[usize], y: &[usize]) -> Vec<usize> {
    x.iter()
        .copied()
        .filter(|g| y.binary_search(g).is_err())
        .collect()
}

fn pick<R: Rng + ?Sized>(genes: &[usize], k: usize, rng: &mut R) -> Vec<usize> {
    let mut out: Vec<usize> = sample(rng, genes.len(), k)
        .into_iter()
        .map(|i| genes[i])
        .collect();
    out.sort_unstable();
    out
}

fn swap(genes: &[usize], remove: &[usize], insert: &[usize]) -> Vec<usize> {
    genes
        .iter()
        .copied()
        .filter(|g| remove.binary_search(g).is_err())
        .chain(insert.iter().copied())
        .collect()
}

/// Per-gene mutation: each gene is replaced with probability `rate` by a
/// draw from its weighted pool, avoiding duplicates.
pub fn mutate<R: Rng + ?Sized>(
    chromo: &Chromosome,
    add_pool: &GenePool,
    del_pool: &GenePool,
    rate: f64,
    rng: &mut R,
) -> Chromosome {
    if rate <= 0.0 {
        return chromo.clone();
    }
    let add = mutate_side(chromo.add_genes(), add_pool, rate, rng);
    let del = mutate_side(chromo.del_genes(), del_pool, rate, rng);
    Chromosome::new(add, del)
}

fn mutate_side<R: Rng + ?Sized>(
    genes: &[usize],
    pool: &GenePool,
    rate: f64,
    rng: &mut R,
) -> Vec<usize> {
    let mut out = genes.to_vec();
    let mut present: HashSet<usize> = genes.iter().copied().collect();
    for slot in out.iter_mut() {
        if !rng.gen_bool(rate) {
            continue;
        }
        for _ in 0..MUTATION_RETRIES {
            let Some(g) = pool.sample(rng) else { break };
            if g == *slot {
                break;
            }
            if present.insert(g) {
                present.remove(slot);
                *slot = g;
                break;
            }
        }
    }
    out
}
