use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{leader_groups, Edge, Sign, SignedDigraph};
use crate::{Error, Result};

/// Parameters of the seeded leader-structure generator.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomGraphParams {
    pub n: usize,
    /// Number of root nodes.
    pub roots: usize,
    /// Number of structurally balanced source SCCs.
    pub sb_sccs: usize,
    /// Number of structurally unbalanced source SCCs.
    pub sub_sccs: usize,
    /// Node count of every source SCC.
    pub scc_size: usize,
    /// Probability of each optional extra edge (SCC chords and edges into
    /// followers).
    pub density: f64,
    /// Probability of an antagonistic sign where the sign is free.
    pub neg_prob: f64,
    /// Build the whole graph structurally balanced.
    pub force_sb: bool,
}

impl Default for RandomGraphParams {
    fn default() -> Self {
        Self {
            n: 9,
            roots: 1,
            sb_sccs: 0,
            sub_sccs: 0,
            scc_size: 3,
            density: 0.1,
            neg_prob: 0.3,
            force_sb: false,
        }
    }
}

impl RandomGraphParams {
    fn check(&self) -> Result<()> {
        let m = self.roots + self.sb_sccs + self.sub_sccs;
        let fail = |msg: alloc::string::String| Err(Error::Infeasible(msg));
        if m == 0 {
            return fail("at least one leader group is required".into());
        }
        if self.sb_sccs > 0 && self.scc_size < 2 {
            return fail("balanced SCCs need at least 2 nodes".into());
        }
        if self.sub_sccs > 0 && self.scc_size < 3 {
            return fail("unbalanced SCCs need at least 3 nodes".into());
        }
        if self.force_sb && self.sub_sccs > 0 {
            return fail("a structurally balanced graph cannot contain unbalanced SCCs".into());
        }
        if !(0.0..=1.0).contains(&self.density) || !(0.0..=1.0).contains(&self.neg_prob) {
            return fail("probabilities must lie in [0, 1]".into());
        }
        let leaders = self.roots + (self.sb_sccs + self.sub_sccs) * self.scc_size;
        if leaders > self.n {
            return fail(format!("{leaders} leader nodes requested but n = {}", self.n));
        }
        if m > 1 && leaders == self.n {
            return fail("several leader groups need at least one follower".into());
        }
        Ok(())
    }
}

struct EdgeList {
    order: Vec<(usize, usize)>,
    signs: BTreeMap<(usize, usize), Sign>,
}

impl EdgeList {
    fn new() -> Self {
        Self {
            order: Vec::new(),
            signs: BTreeMap::new(),
        }
    }

    /// Adds `u -> v` unless present. The reverse edge, if any, dictates the
    /// sign so digons stay sign-symmetric.
    fn add(&mut self, u: usize, v: usize, sign: Sign) {
        if u == v || self.signs.contains_key(&(u, v)) {
            return;
        }
        let sign = self.signs.get(&(v, u)).copied().unwrap_or(sign);
        self.signs.insert((u, v), sign);
        self.order.push((u, v));
    }
}

fn gauge_sign(d: &[i8], u: usize, v: usize) -> Sign {
    if d[u] * d[v] > 0 {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

/// Generates a signed digraph with exactly the requested leader groups.
///
/// Leader groups receive no edges from outside. The first follower (the
/// hub) receives one edge from every group and every other follower hangs
/// off an earlier follower, so every follower is reachable from every leader
/// group. Node labels and edge order are shuffled, and the result is checked
/// with [`leader_groups`] before it is returned.
pub fn random_leader_graph(params: &RandomGraphParams, seed: u64) -> Result<SignedDigraph> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.n;
    let size = params.scc_size;

    let mut d: Vec<i8> = (0..n)
        .map(|_| if rng.random_bool(params.neg_prob) { -1 } else { 1 })
        .collect();
    if params.force_sb && !d.is_empty() {
        d[0] = 1;
    }

    let mut edges = EdgeList::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    for _ in 0..params.roots {
        groups.push(alloc::vec![next]);
        next += 1;
    }
    for scc in 0..params.sb_sccs + params.sub_sccs {
        let unbalanced = scc >= params.sb_sccs;
        let members: Vec<usize> = (next..next + size).collect();
        next += size;
        for i in 0..size {
            let (u, v) = (members[i], members[(i + 1) % size]);
            let mut s = gauge_sign(&d, u, v);
            if unbalanced && i == size - 1 {
                s = s.flipped();
            }
            edges.add(u, v, s);
        }
        for &u in &members {
            for &v in &members {
                if u != v && rng.random_bool(params.density) {
                    edges.add(u, v, gauge_sign(&d, u, v));
                }
            }
        }
        groups.push(members);
    }
    let leader_count = next;
    let followers: Vec<usize> = (leader_count..n).collect();

    let follower_sign = |rng: &mut ChaCha8Rng, u: usize, v: usize| {
        if params.force_sb {
            gauge_sign(&d, u, v)
        } else if rng.random_bool(params.neg_prob) {
            Sign::Negative
        } else {
            Sign::Positive
        }
    };

    if let Some(&hub) = followers.first() {
        for grp in &groups {
            let u = grp[rng.random_range(0..grp.len())];
            let s = follower_sign(&mut rng, u, hub);
            edges.add(u, hub, s);
        }
        for j in 1..followers.len() {
            let u = followers[rng.random_range(0..j)];
            let s = follower_sign(&mut rng, u, followers[j]);
            edges.add(u, followers[j], s);
        }
        for &v in &followers {
            for u in 0..n {
                if u != v && rng.random_bool(params.density) {
                    let s = follower_sign(&mut rng, u, v);
                    edges.add(u, v, s);
                }
            }
        }
    }

    let mut relabel: Vec<usize> = (0..n).collect();
    relabel.shuffle(&mut rng);
    let mut order = edges.order.clone();
    order.shuffle(&mut rng);
    let list = order
        .iter()
        .map(|&(u, v)| Edge::new(relabel[u], relabel[v], edges.signs[&(u, v)]))
        .collect();
    let g = SignedDigraph::new(n, list)?;

    let ls = leader_groups(&g);
    if (ls.l1, ls.l2_sb, ls.l2_sub) != (params.roots, params.sb_sccs, params.sub_sccs) {
        return Err(Error::Infeasible(format!(
            "generator produced ({}, {}, {}) leader groups",
            ls.l1, ls.l2_sb, ls.l2_sub
        )));
    }
    Ok(g)
}
