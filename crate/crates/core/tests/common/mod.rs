#![allow(dead_code)]

//! Test oracles built by brute force, independent of the library's own
//! recurrences and scan.
//!
//! The central piece enumerates every distinct arrangement of the multiset
//! (m copies of each rank) and computes optimal play by backward induction
//! over *observation classes*: two prefixes are indistinguishable exactly
//! when they show the same pattern of new-candidate relative ranks and
//! repeat identities, and the player may accept after any arrival. From the
//! same tree the oracle extracts state-conditional values, so every dynamic
//! programming table can be checked against nothing but counting.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn rat_u(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Every distinct arrangement of `{1..=n}` with multiplicity `m`, by direct
/// placement (not the library's permutation iterator).
pub fn all_arrangements(m: usize, n: usize) -> Vec<Vec<u32>> {
    let mut remaining = vec![m; n + 1];
    let mut current = Vec::with_capacity(m * n);
    let mut out = Vec::new();
    fn place(
        remaining: &mut Vec<usize>,
        current: &mut Vec<u32>,
        total: usize,
        out: &mut Vec<Vec<u32>>,
    ) {
        if current.len() == total {
            out.push(current.clone());
            return;
        }
        for rank in 1..remaining.len() {
            if remaining[rank] > 0 {
                remaining[rank] -= 1;
                current.push(rank as u32);
                place(remaining, current, total, out);
                current.pop();
                remaining[rank] += 1;
            }
        }
    }
    place(&mut remaining, &mut current, m * n, &mut out);
    out
}

/// Scan state after each arrival: distinct count, appearance count of the
/// current maximal, and whether that arrival was the maximal's final copy.
fn state_sequence(arrangement: &[u32], m: usize, n: usize) -> Vec<(usize, usize, bool)> {
    let mut seen = vec![false; n + 1];
    let mut distinct = 0usize;
    let mut max_rank = 0u32;
    let mut max_count = 0usize;
    let mut out = Vec::with_capacity(arrangement.len());
    for &rank in arrangement {
        let mut nice = false;
        if rank > max_rank {
            max_rank = rank;
            max_count = 1;
            distinct += 1;
            seen[rank as usize] = true;
            nice = m == 1;
        } else if rank == max_rank {
            max_count += 1;
            nice = max_count == m;
        } else if !seen[rank as usize] {
            seen[rank as usize] = true;
            distinct += 1;
        }
        out.push((distinct, max_count, nice));
    }
    out
}

/// Observation made at one arrival: a repeat of an already-seen candidate
/// (identified by its first-arrival order) or a new candidate slotted at a
/// relative rank among the distinct candidates seen so far.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Observation {
    Repeat(usize),
    NewAtRank(usize),
}

fn observe(arrangement: &[u32], t: usize) -> Observation {
    let arrival = arrangement[t];
    let mut first_seen = Vec::new();
    for &r in &arrangement[..t] {
        if !first_seen.contains(&r) {
            first_seen.push(r);
        }
    }
    if let Some(idx) = first_seen.iter().position(|&r| r == arrival) {
        Observation::Repeat(idx)
    } else {
        let below = first_seen.iter().filter(|&&r| r < arrival).count();
        Observation::NewAtRank(below)
    }
}

struct Node {
    /// Arrivals inspected so far (node depth).
    t: usize,
    members: Vec<usize>,
    accept_wins: u64,
    value: BigRational,
    continue_value: BigRational,
    children: BTreeMap<Observation, Node>,
}

pub struct PlayOracle {
    pub m: usize,
    pub n: usize,
    arrangements: Vec<Vec<u32>>,
    states: Vec<Vec<(usize, usize, bool)>>,
    root: Node,
}

fn build_node(arrangements: &[Vec<u32>], members: Vec<usize>, t: usize, n: usize) -> Node {
    let total = arrangements[0].len();
    let accept_wins = if t == 0 {
        0
    } else {
        members
            .iter()
            .filter(|&&a| arrangements[a][t - 1] == n as u32)
            .count() as u64
    };
    let mut node = Node {
        t,
        members,
        accept_wins,
        value: BigRational::zero(),
        continue_value: BigRational::zero(),
        children: BTreeMap::new(),
    };
    if t < total {
        let mut groups: BTreeMap<Observation, Vec<usize>> = BTreeMap::new();
        for &a in &node.members {
            groups
                .entry(observe(&arrangements[a], t))
                .or_default()
                .push(a);
        }
        let mut acc = BigRational::zero();
        for (obs, group) in groups {
            let weight = rat_u(group.len() as u64, node.members.len() as u64);
            let child = build_node(arrangements, group, t + 1, n);
            acc += weight * &child.value;
            node.children.insert(obs, child);
        }
        node.continue_value = acc;
    }
    let accept_value = rat_u(node.accept_wins, node.members.len() as u64);
    node.value = if t >= 1 && accept_value > node.continue_value {
        accept_value
    } else {
        node.continue_value.clone()
    };
    node
}

impl PlayOracle {
    pub fn new(m: usize, n: usize) -> Self {
        let arrangements = all_arrangements(m, n);
        let states = arrangements
            .iter()
            .map(|a| state_sequence(a, m, n))
            .collect();
        let members = (0..arrangements.len()).collect();
        let root = build_node(&arrangements, members, 0, n);
        Self {
            m,
            n,
            arrangements,
            states,
            root,
        }
    }

    /// Success probability of full-information optimal play (acceptance
    /// permitted after any arrival, not just nice ones).
    pub fn optimal_value(&self) -> BigRational {
        self.root.value.clone()
    }

    /// Mean optimal continuation value over every first entry into the
    /// post-rejection state `(k, i)`, together with the visit count.
    pub fn state_value(&self, i: usize, k: usize) -> Option<BigRational> {
        let mut weighted = BigRational::zero();
        let mut visits = 0u64;
        self.for_first_entries(i, k, |node| {
            weighted += rat_u(node.members.len() as u64, 1) * &node.continue_value;
            visits += node.members.len() as u64;
        });
        (visits > 0).then(|| weighted / rat_u(visits, 1))
    }

    /// Conditional success of "accept the first nice arrival from here",
    /// over the same first-entry visits.
    pub fn accept_first_nice_value(&self, i: usize, k: usize) -> Option<BigRational> {
        let mut wins = 0u64;
        let mut visits = 0u64;
        self.for_first_entries(i, k, |node| {
            for &a in &node.members {
                visits += 1;
                let states = &self.states[a];
                if let Some(first_nice) = (node.t..states.len()).find(|&t| states[t].2) {
                    let best_at = self.arrangements[a][first_nice] == self.n as u32;
                    wins += u64::from(best_at);
                }
            }
        });
        (visits > 0).then(|| rat_u(wins, visits))
    }

    fn for_first_entries<'a>(&'a self, i: usize, k: usize, mut f: impl FnMut(&'a Node)) {
        fn walk<'a>(
            node: &'a Node,
            states: &[Vec<(usize, usize, bool)>],
            i: usize,
            k: usize,
            f: &mut impl FnMut(&'a Node),
        ) {
            if node.t >= 1 {
                let probe = node.members[0];
                let (dk, di, _) = states[probe][node.t - 1];
                let entered = dk == k && di == i;
                let fresh = node.t == 1 || {
                    let (pk, pi, _) = states[probe][node.t - 2];
                    pk != k || pi != i
                };
                if entered && fresh {
                    f(node);
                    return;
                }
            }
            for child in node.children.values() {
                walk(child, states, i, k, f);
            }
        }
        walk(&self.root, &self.states, i, k, &mut f);
    }

    /// Distribution of the maximal's appearance count at the arrival of the
    /// k-th distinct candidate, by counting.
    pub fn state_distribution(&self, i: usize, k: usize) -> BigRational {
        let mut hits = 0u64;
        for states in &self.states {
            if let Some(t) = states.iter().position(|&(dk, _, _)| dk == k) {
                hits += u64::from(states[t].1 == i);
            }
        }
        rat_u(hits, self.arrangements.len() as u64)
    }

    /// Success probability of the threshold strategy, by scanning every
    /// arrangement from the start.
    pub fn threshold_value(&self, threshold: usize) -> BigRational {
        let mut wins = 0u64;
        for (a, states) in self.arrangements.iter().zip(&self.states) {
            if let Some(t) = states
                .iter()
                .position(|&(dk, _, nice)| nice && dk >= threshold)
            {
                wins += u64::from(a[t] == self.n as u32);
            }
        }
        rat_u(wins, self.arrangements.len() as u64)
    }

    /// Smallest threshold maximizing [`Self::threshold_value`], with the
    /// maximum.
    pub fn best_threshold(&self) -> (usize, BigRational) {
        let mut best_k = 1;
        let mut best = self.threshold_value(1);
        for k in 2..=self.n {
            let v = self.threshold_value(k);
            if v > best {
                best = v;
                best_k = k;
            }
        }
        (best_k, best)
    }
}
