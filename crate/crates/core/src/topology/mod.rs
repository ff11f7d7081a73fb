//! Deployment topology construction.
//!
//! Builds the Tier-1 side of the network: AP fields, balanced AP groups,
//! intra-group connectivity (serial radio stripe or hierarchical tree),
//! DU placement, and the iterative leading-AP/DU association loop.

mod kmeans;

pub use kmeans::kmeans_cluster;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::Point2D;
use crate::seed::derive_seed;

/// Intra-group connection scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Serial daisy-chain of APs (radio stripe); leading AP is a path endpoint.
    #[serde(rename = "rs")]
    RadioStripe,
    /// Spanning-tree topology; leading AP is a maximum-degree node.
    #[serde(rename = "hs")]
    Hierarchical,
}

impl Scheme {
    pub fn label(&self) -> &'static str {
        match self {
            Scheme::RadioStripe => "rs",
            Scheme::Hierarchical => "hs",
        }
    }
}

/// A field of AP locations drawn uniformly over a square region.
#[derive(Debug, Clone, Serialize)]
pub struct APField {
    /// Region side length R, meters.
    pub region_side: f64,
    pub aps: Vec<Point2D>,
    pub seed: u64,
}

/// A group of APs sharing one Tier-1 fronthaul run.
#[derive(Debug, Clone, Serialize)]
pub struct Group {
    pub id: usize,
    /// Member AP indices, sorted ascending.
    pub members: Vec<usize>,
    pub centroid: Point2D,
    /// Set when the group is undersized but no size-feasible merge exists.
    pub merge_blocked: bool,
}

impl Group {
    pub fn new(id: usize, mut members: Vec<usize>, points: &[Point2D]) -> Self {
        members.sort_unstable();
        let coords: Vec<Point2D> = members.iter().map(|&i| points[i]).collect();
        Group {
            id,
            centroid: Point2D::centroid(&coords),
            members,
            merge_blocked: false,
        }
    }
}

/// The built intra-group connectivity of one group.
#[derive(Debug, Clone, Serialize)]
pub struct IntraGroupTopology {
    pub scheme: Scheme,
    /// Undirected edges as (AP index, AP index, length in meters).
    pub edges: Vec<(usize, usize, f64)>,
    /// Sum of edge lengths, meters.
    pub total_length: f64,
    pub leading_ap: usize,
}

/// Final DU positions and group/AP association.
#[derive(Debug, Clone, Serialize)]
pub struct DUPlacement {
    pub positions: Vec<Point2D>,
    /// Group index -> DU index.
    pub group_assignment: Vec<usize>,
    /// Per-DU leading AP indices.
    pub leading_sets: Vec<Vec<usize>>,
    /// Per-DU non-leading AP indices.
    pub nonleading_sets: Vec<Vec<usize>>,
    pub converged: bool,
    pub iterations: usize,
}

/// Inputs for the topology construction loop.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TopologyConfig {
    /// Number of APs.
    pub l: usize,
    /// Number of DUs.
    pub w: usize,
    /// Number of initial k-means groups.
    pub g_initial: usize,
    /// Maximum permissible group size (split threshold).
    pub g_s: usize,
    /// Minimum permissible group size (merge threshold).
    pub g_m: usize,
    /// Largest group size solved by exhaustive open-path search.
    pub l_max: usize,
    /// DU movement convergence threshold, meters.
    pub epsilon: f64,
    pub scheme: Scheme,
    pub max_iterations: usize,
}

impl Default for TopologyConfig {
    fn default() -> Self {
        TopologyConfig {
            l: 1000,
            w: 4,
            g_initial: 150,
            g_s: 15,
            g_m: 3,
            l_max: 9,
            epsilon: 1e-3,
            scheme: Scheme::RadioStripe,
            max_iterations: 100,
        }
    }
}

/// Complete deployment geometry produced by [`nofac`].
#[derive(Debug, Clone, Serialize)]
pub struct DeploymentScenario {
    pub scheme: Scheme,
    pub field: APField,
    pub groups: Vec<Group>,
    /// One topology per group, same order as `groups`.
    pub topologies: Vec<IntraGroupTopology>,
    pub dus: DUPlacement,
}

impl DeploymentScenario {
    /// (DU index, leading AP index) pairs in deterministic order.
    pub fn leading_links(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (w, leads) in self.dus.leading_sets.iter().enumerate() {
            for &ap in leads {
                out.push((w, ap));
            }
        }
        out
    }
}

/// Draws `config.l` AP positions i.i.d. uniform over the square region.
pub fn generate_ap_field(config: &TopologyConfig, region_side: f64, seed: u64) -> APField {
    assert!(config.l >= 1 && region_side > 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let aps = (0..config.l)
        .map(|_| {
            Point2D::new(
                rng.gen::<f64>() * region_side,
                rng.gen::<f64>() * region_side,
            )
        })
        .collect();
    APField {
        region_side,
        aps,
        seed,
    }
}

/// Split-merge refinement: splits oversized groups by recursive 2-means and
/// merges undersized groups into their nearest size-feasible neighbor.
///
/// Undersized groups with no feasible merge partner keep their size and are
/// flagged with `merge_blocked`. Groups are processed in ascending size
/// order and each group participates in at most one merge per pass.
pub fn split_merge_refine(
    groups: &[Group],
    field: &APField,
    g_s: usize,
    g_m: usize,
) -> Vec<Group> {
    assert!(g_m < g_s);
    let points = &field.aps;

    // Split phase.
    let mut queue: std::collections::VecDeque<Vec<usize>> =
        groups.iter().map(|g| g.members.clone()).collect();
    let mut sized: Vec<Vec<usize>> = Vec::new();
    while let Some(m) = queue.pop_front() {
        if m.len() > g_s {
            let (a, b) = two_means_split(&m, points);
            queue.push_back(a);
            queue.push_back(b);
        } else {
            sized.push(m);
        }
    }

    // Merge phase.
    let mut alive: Vec<Option<Vec<usize>>> = sized.into_iter().map(Some).collect();
    let mut blocked = vec![false; alive.len()];
    let mut touched = vec![false; alive.len()];
    let mut order: Vec<usize> = (0..alive.len()).collect();
    order.sort_by_key(|&i| (alive[i].as_ref().unwrap().len(), i));
    for i in order {
        let size_i = match &alive[i] {
            Some(m) => m.len(),
            None => continue,
        };
        if size_i >= g_m || touched[i] {
            continue;
        }
        let ci = centroid_of(alive[i].as_ref().unwrap(), points);
        let mut target: Option<(f64, usize)> = None;
        for (j, slot) in alive.iter().enumerate() {
            if j == i {
                continue;
            }
            if let Some(mj) = slot {
                if size_i + mj.len() > g_s {
                    continue;
                }
                let d = ci.distance(&centroid_of(mj, points));
                if target.map_or(true, |(bd, _)| d < bd) {
                    target = Some((d, j));
                }
            }
        }
        match target {
            Some((_, j)) => {
                let mine = alive[i].take().unwrap();
                alive[j].as_mut().unwrap().extend(mine);
                touched[j] = true;
            }
            None => blocked[i] = true,
        }
    }

    let mut out = Vec::new();
    for (i, slot) in alive.into_iter().enumerate() {
        if let Some(m) = slot {
            let mut g = Group::new(out.len(), m, points);
            g.merge_blocked = blocked[i];
            out.push(g);
        }
    }
    out
}

/// Deterministic 2-means on member coordinates, seeded with the mutually
/// farthest pair. Both halves are guaranteed nonempty.
fn two_means_split(members: &[usize], points: &[Point2D]) -> (Vec<usize>, Vec<usize>) {
    debug_assert!(members.len() >= 2);
    let coords: Vec<Point2D> = members.iter().map(|&i| points[i]).collect();
    let n = coords.len();

    let mut init = (0usize, 1usize);
    let mut best_d = f64::NEG_INFINITY;
    for a in 0..n {
        for b in (a + 1)..n {
            let d = coords[a].distance(&coords[b]);
            if d > best_d {
                best_d = d;
                init = (a, b);
            }
        }
    }
    let mut centers = [coords[init.0], coords[init.1]];
    let mut assignment = vec![0u8; n];
    for _ in 0..100 {
        let new_assignment: Vec<u8> = coords
            .iter()
            .map(|p| u8::from(p.distance(&centers[1]) < p.distance(&centers[0])))
            .collect();
        if new_assignment == assignment && assignment.iter().any(|&a| a == 1) {
            break;
        }
        assignment = new_assignment;
        for side in 0..2u8 {
            let pts: Vec<Point2D> = coords
                .iter()
                .zip(&assignment)
                .filter(|(_, &a)| a == side)
                .map(|(p, _)| *p)
                .collect();
            if !pts.is_empty() {
                centers[side as usize] = Point2D::centroid(&pts);
            }
        }
        if assignment.iter().all(|&a| a == 0) || assignment.iter().all(|&a| a == 1) {
            // Degenerate geometry (e.g. coincident points): halve by index.
            let half = n / 2;
            return (
                members[..half].to_vec(),
                members[half..].to_vec(),
            );
        }
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (&m, &s) in members.iter().zip(&assignment) {
        if s == 0 {
            a.push(m);
        } else {
            b.push(m);
        }
    }
    (a, b)
}

fn centroid_of(members: &[usize], points: &[Point2D]) -> Point2D {
    let coords: Vec<Point2D> = members.iter().map(|&i| points[i]).collect();
    Point2D::centroid(&coords)
}

/// Builds the serial (radio stripe) topology of one group.
///
/// Groups of at most `l_max` members are solved exactly: the returned path
/// is the minimum-length open Hamiltonian path over the members. Larger
/// groups fall back to nearest-neighbor construction started from every
/// member, keeping the shortest result.
pub fn build_radio_stripe(group: &Group, field: &APField, l_max: usize) -> IntraGroupTopology {
    let members = &group.members;
    let n = members.len();
    if n == 1 {
        return IntraGroupTopology {
            scheme: Scheme::RadioStripe,
            edges: Vec::new(),
            total_length: 0.0,
            leading_ap: members[0],
        };
    }
    let dist = pairwise_distances(members, &field.aps);
    let order = if n <= l_max {
        exact_open_path(&dist)
    } else {
        nearest_neighbor_best(&dist)
    };
    let mut edges = Vec::with_capacity(n - 1);
    let mut total = 0.0;
    for win in order.windows(2) {
        let (a, b) = (win[0], win[1]);
        let d = dist[a][b];
        edges.push((members[a], members[b], d));
        total += d;
    }
    IntraGroupTopology {
        scheme: Scheme::RadioStripe,
        edges,
        total_length: total,
        leading_ap: members[order[0]].min(members[*order.last().unwrap()]),
    }
}

/// Builds the hierarchical topology of one group as the Euclidean MST
/// (Prim's algorithm) over the complete graph on its members.
pub fn build_mst(group: &Group, field: &APField) -> IntraGroupTopology {
    let members = &group.members;
    let n = members.len();
    if n == 1 {
        return IntraGroupTopology {
            scheme: Scheme::Hierarchical,
            edges: Vec::new(),
            total_length: 0.0,
            leading_ap: members[0],
        };
    }
    let dist = pairwise_distances(members, &field.aps);
    let mut in_tree = vec![false; n];
    let mut best_cost = vec![f64::INFINITY; n];
    let mut best_parent = vec![usize::MAX; n];
    in_tree[0] = true;
    for j in 1..n {
        best_cost[j] = dist[0][j];
        best_parent[j] = 0;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut total = 0.0;
    for _ in 1..n {
        let mut pick = usize::MAX;
        let mut pick_cost = f64::INFINITY;
        for j in 0..n {
            if !in_tree[j] && best_cost[j] < pick_cost {
                pick_cost = best_cost[j];
                pick = j;
            }
        }
        in_tree[pick] = true;
        edges.push((members[best_parent[pick]], members[pick], pick_cost));
        total += pick_cost;
        for j in 0..n {
            if !in_tree[j] && dist[pick][j] < best_cost[j] {
                best_cost[j] = dist[pick][j];
                best_parent[j] = pick;
            }
        }
    }
    IntraGroupTopology {
        scheme: Scheme::Hierarchical,
        edges,
        total_length: total,
        leading_ap: members[0],
    }
}

fn pairwise_distances(members: &[usize], points: &[Point2D]) -> Vec<Vec<f64>> {
    let n = members.len();
    let mut dist = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in (a + 1)..n {
            let d = points[members[a]].distance(&points[members[b]]);
            dist[a][b] = d;
            dist[b][a] = d;
        }
    }
    dist
}

/// Exhaustive minimum open Hamiltonian path by DFS with length pruning.
fn exact_open_path(dist: &[Vec<f64>]) -> Vec<usize> {
    let n = dist.len();
    let mut best = f64::INFINITY;
    let mut best_path: Vec<usize> = (0..n).collect();
    let mut path = Vec::with_capacity(n);
    let mut used = vec![false; n];

    fn dfs(
        dist: &[Vec<f64>],
        path: &mut Vec<usize>,
        used: &mut [bool],
        len: f64,
        best: &mut f64,
        best_path: &mut Vec<usize>,
    ) {
        let n = dist.len();
        if path.len() == n {
            if len < *best {
                *best = len;
                best_path.clone_from(path);
            }
            return;
        }
        let last = *path.last().unwrap();
        for next in 0..n {
            if used[next] {
                continue;
            }
            let step = len + dist[last][next];
            if step >= *best {
                continue;
            }
            used[next] = true;
            path.push(next);
            dfs(dist, path, used, step, best, best_path);
            path.pop();
            used[next] = false;
        }
    }

    for start in 0..n {
        used[start] = true;
        path.push(start);
        dfs(dist, &mut path, &mut used, 0.0, &mut best, &mut best_path);
        path.pop();
        used[start] = false;
    }
    best_path
}

/// Nearest-neighbor open path started from every node; shortest result kept.
fn nearest_neighbor_best(dist: &[Vec<f64>]) -> Vec<usize> {
    let n = dist.len();
    let mut best = f64::INFINITY;
    let mut best_path = Vec::new();
    for start in 0..n {
        let mut used = vec![false; n];
        let mut path = vec![start];
        used[start] = true;
        let mut total = 0.0;
        for _ in 1..n {
            let last = *path.last().unwrap();
            let mut pick = usize::MAX;
            let mut pick_d = f64::INFINITY;
            for j in 0..n {
                if !used[j] && dist[last][j] < pick_d {
                    pick_d = dist[last][j];
                    pick = j;
                }
            }
            used[pick] = true;
            path.push(pick);
            total += pick_d;
        }
        if total < best {
            best = total;
            best_path = path;
        }
    }
    best_path
}

/// Selects the leading AP of a built topology relative to its serving DU.
///
/// Radio stripe: the path endpoint nearer the DU. Hierarchical: the
/// maximum-degree node, ties broken by DU distance, then by lowest index.
pub fn select_leading_ap(topo: &IntraGroupTopology, field: &APField, du: Point2D) -> usize {
    if topo.edges.is_empty() {
        return topo.leading_ap;
    }
    let mut degree: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    for &(a, b, _) in &topo.edges {
        *degree.entry(a).or_insert(0) += 1;
        *degree.entry(b).or_insert(0) += 1;
    }
    let candidates: Vec<usize> = match topo.scheme {
        Scheme::RadioStripe => degree
            .iter()
            .filter(|(_, &d)| d == 1)
            .map(|(&ap, _)| ap)
            .collect(),
        Scheme::Hierarchical => {
            let max_deg = *degree.values().max().unwrap();
            degree
                .iter()
                .filter(|(_, &d)| d == max_deg)
                .map(|(&ap, _)| ap)
                .collect()
        }
    };
    candidates
        .into_iter()
        .min_by(|&a, &b| {
            let da = field.aps[a].distance(&du);
            let db = field.aps[b].distance(&du);
            da.partial_cmp(&db).unwrap().then(a.cmp(&b))
        })
        .unwrap()
}

/// Iterative association and configuration loop.
///
/// Alternates split-merge refinement, intra-group topology construction,
/// leading-AP selection, and DU repositioning (each DU moves to the
/// centroid of all APs in its assigned groups) until the maximum DU
/// displacement drops below `epsilon` or `max_iterations` is reached.
/// Never aborts: on non-convergence the best-so-far scenario is returned
/// with `converged = false`.
pub fn nofac(config: &TopologyConfig, field: &APField, seed: u64) -> DeploymentScenario {
    let points = &field.aps;
    let mut groups = kmeans_cluster(points, config.g_initial, derive_seed(seed, &[1]));
    let mut du_pos: Vec<Point2D> = kmeans_cluster(points, config.w, derive_seed(seed, &[2]))
        .into_iter()
        .map(|g| g.centroid)
        .collect();

    let mut topologies: Vec<IntraGroupTopology> = Vec::new();
    let mut group_assignment: Vec<usize> = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut built_membership: Vec<Vec<usize>> = Vec::new();

    for iter in 1..=config.max_iterations {
        iterations = iter;
        groups = split_merge_refine(&groups, field, config.g_s, config.g_m);

        group_assignment = groups
            .iter()
            .map(|g| nearest_du(g.centroid, &du_pos))
            .collect();

        // Topology depends only on membership; rebuild only when the
        // split-merge pass actually changed the groups.
        let membership: Vec<Vec<usize>> = groups.iter().map(|g| g.members.clone()).collect();
        if membership != built_membership {
            topologies = groups
                .iter()
                .map(|g| match config.scheme {
                    Scheme::RadioStripe => build_radio_stripe(g, field, config.l_max),
                    Scheme::Hierarchical => build_mst(g, field),
                })
                .collect();
            built_membership = membership;
        }
        for (gi, topo) in topologies.iter_mut().enumerate() {
            topo.leading_ap = select_leading_ap(topo, field, du_pos[group_assignment[gi]]);
        }

        // Reposition each DU at the centroid of all APs it serves.
        let mut new_pos = du_pos.clone();
        for w in 0..config.w {
            let coords: Vec<Point2D> = groups
                .iter()
                .zip(&group_assignment)
                .filter(|(_, &a)| a == w)
                .flat_map(|(g, _)| g.members.iter().map(|&i| points[i]))
                .collect();
            if !coords.is_empty() {
                new_pos[w] = Point2D::centroid(&coords);
            }
        }
        let displacement = du_pos
            .iter()
            .zip(&new_pos)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max);
        du_pos = new_pos;
        if displacement < config.epsilon {
            converged = true;
            break;
        }
    }

    let mut leading_sets = vec![Vec::new(); config.w];
    let mut nonleading_sets = vec![Vec::new(); config.w];
    for (gi, g) in groups.iter().enumerate() {
        let w = group_assignment[gi];
        let lead = topologies[gi].leading_ap;
        leading_sets[w].push(lead);
        nonleading_sets[w].extend(g.members.iter().filter(|&&m| m != lead));
    }
    for set in leading_sets.iter_mut().chain(nonleading_sets.iter_mut()) {
        set.sort_unstable();
    }

    DeploymentScenario {
        scheme: config.scheme,
        field: field.clone(),
        groups,
        topologies,
        dus: DUPlacement {
            positions: du_pos,
            group_assignment,
            leading_sets,
            nonleading_sets,
            converged,
            iterations,
        },
    }
}

fn nearest_du(p: Point2D, dus: &[Point2D]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (w, du) in dus.iter().enumerate() {
        let d = p.distance(du);
        if d < best_d {
            best_d = d;
            best = w;
        }
    }
    best
}
