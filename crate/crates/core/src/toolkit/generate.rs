use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::documents::{InstanceDocument, Terminals};
use crate::congestion::bramble_size_threshold;
use crate::digraph::{is_k_strong, Digraph};
use crate::error::{invalid, Error, Result};
use crate::obstruction::{congestion, verify_bramble};

/// Rounds of random arc insertion before giving up on `k`-strength.
pub const STRENGTH_ROUNDS: usize = 200;

/// Complete digraph on `n` vertices.
pub fn gen_complete(n: usize) -> Digraph {
    Digraph::complete(n)
}

/// Uniform random digraph: every ordered pair is an arc with probability `p`.
pub fn gen_random_digraph(n: usize, p: f64, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p.clamp(0.0, 1.0)) {
                d.add_edge(u, v).expect("in range");
            }
        }
    }
    d
}

/// Number of hub vertices used by [`gen_planted_bramble_instance`].
fn hub_count(c: usize, bag_count: usize) -> usize {
    if c < 2 {
        0
    } else {
        bag_count.div_ceil(2 * c).max(1)
    }
}

/// Instance with a planted bramble of exactly `bag_count` bags and
/// congestion exactly `c`, `k` terminal pairs, on a `k`-strong digraph.
///
/// Every bag owns a private vertex; hub vertices join between 3 and `c` bags
/// (exactly `c` for the first hub, 2 when `c = 2`) and are joined to the
/// private vertex of each of their bags in both directions. Bags that share
/// no hub are linked by one arc each way. The first source is the first hub
/// when `c >= 3`; all other terminals are fresh vertices with `k + 1` random
/// arcs in each direction. Random arcs are then added until the digraph is
/// `k`-strong.
pub fn gen_planted_bramble_instance(
    k: usize,
    c: usize,
    bag_count: usize,
    seed: u64,
) -> Result<InstanceDocument> {
    if k == 0 || c == 0 {
        return Err(invalid("k and c must be at least 1"));
    }
    let need = bramble_size_threshold(k);
    if bag_count < need {
        return Err(invalid(format!(
            "{bag_count} bags requested, at least {need} needed for k = {k}"
        )));
    }
    if c > bag_count {
        return Err(invalid(format!(
            "congestion {c} exceeds the number of bags {bag_count}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hubs = hub_count(c, bag_count);
    let mut names: Vec<String> = (0..bag_count).map(|i| format!("p{i}")).collect();
    names.extend((0..hubs).map(|h| format!("h{h}")));
    let mut d = Digraph::new(bag_count + hubs);
    let mut bags: Vec<Vec<usize>> = (0..bag_count).map(|i| vec![i]).collect();

    let bag_ids: Vec<usize> = (0..bag_count).collect();
    for h in 0..hubs {
        let hub = bag_count + h;
        let size = if h == 0 || c < 3 {
            c
        } else {
            rng.gen_range(3..=c)
        };
        for &i in bag_ids.choose_multiple(&mut rng, size) {
            bags[i].push(hub);
            d.add_edge(i, hub)?;
            d.add_edge(hub, i)?;
        }
    }
    for bag in &mut bags {
        bag.sort_unstable();
    }
    for i in 0..bag_count {
        for j in i + 1..bag_count {
            if bags[i].iter().any(|v| bags[j].contains(v)) {
                continue;
            }
            let (a, b) = (
                *bags[i].choose(&mut rng).unwrap(),
                *bags[j].choose(&mut rng).unwrap(),
            );
            d.add_edge(a, b)?;
            let (a, b) = (
                *bags[i].choose(&mut rng).unwrap(),
                *bags[j].choose(&mut rng).unwrap(),
            );
            d.add_edge(b, a)?;
        }
    }

    let fresh = |d: &mut Digraph, names: &mut Vec<String>, name: String, rng: &mut ChaCha8Rng| {
        let v = d.add_vertex();
        names.push(name);
        let others: Vec<usize> = (0..v).collect();
        for &w in others.choose_multiple(rng, k + 1) {
            d.add_edge(v, w).expect("in range");
        }
        for &w in others.choose_multiple(rng, k + 1) {
            d.add_edge(w, v).expect("in range");
        }
        v
    };
    let mut sources = Vec::with_capacity(k);
    let mut sinks = Vec::with_capacity(k);
    for i in 0..k {
        let s = if i == 0 && c >= 3 {
            bag_count
        } else {
            fresh(&mut d, &mut names, format!("s{i}"), &mut rng)
        };
        sources.push(s);
        sinks.push(fresh(&mut d, &mut names, format!("t{i}"), &mut rng));
    }

    let n = d.vertex_count();
    let mut rounds = 0;
    while !is_k_strong(&d, k) {
        if rounds == STRENGTH_ROUNDS {
            return Err(Error::GuardExceeded(format!(
                "digraph not {k}-strong after {STRENGTH_ROUNDS} rounds of arc insertion"
            )));
        }
        rounds += 1;
        for _ in 0..n {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if u != v {
                d.add_edge(u, v)?;
            }
        }
    }

    let doc = InstanceDocument {
        schema_version: super::SCHEMA_VERSION,
        digraph: d,
        bramble: Some(bags),
        terminals: Some(Terminals {
            sources,
            sinks,
            budget: 2 * c.div_ceil(2),
        }),
        vertex_names: Some(names),
    };
    let bags = doc.bags()?;
    if let Some(v) = verify_bramble(&doc.digraph, bags)?.violation {
        return Err(Error::Internal(format!(
            "planted bags are not a bramble: {v}"
        )));
    }
    if congestion(bags) != c {
        return Err(Error::Internal(format!(
            "planted congestion {} differs from {c}",
            congestion(bags)
        )));
    }
    doc.validate()?;
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_small_cases() {
        for (k, c, m) in [(1, 1, 4), (1, 3, 6), (2, 2, 18), (2, 4, 18), (3, 5, 40)] {
            let doc = gen_planted_bramble_instance(k, c, m, 11).unwrap();
            let bags = doc.bags().unwrap();
            assert_eq!(bags.len(), m);
            assert_eq!(congestion(bags), c);
            assert!(is_k_strong(&doc.digraph, k));
            assert!(doc.digraph.vertex_count() <= 60);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = gen_planted_bramble_instance(2, 3, 18, 5).unwrap();
        let b = gen_planted_bramble_instance(2, 3, 18, 5).unwrap();
        let c = gen_planted_bramble_instance(2, 3, 18, 6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn too_few_bags() {
        assert!(gen_planted_bramble_instance(2, 2, 17, 0).is_err());
    }
}
