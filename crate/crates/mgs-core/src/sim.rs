//! The mobile telephone model round state machine and its protocols.
//!
//! Each round runs four phases in order:
//!
//! 1. **advertise** - every node publishes its `b`-bit tag; with `b >= 1`
//!    the tag's low bit is the node's informed status at the start of the
//!    round.
//! 2. **propose** - nodes send at most one connection proposal each,
//!    according to the protocol strategy.
//! 3. **resolve** - a node that proposed cannot accept; every other node
//!    with incoming proposals accepts exactly one per the resolution
//!    policy (or all of them under the unbounded-acceptance baseline).
//! 4. **communicate** - for every connection with exactly one informed
//!    endpoint, the uninformed endpoint learns the rumor. Informed status
//!    is read from the start of the round, so a node informed in round
//!    `t` advertises informed from round `t + 1`.
//!
//! With single acceptance the realized connections always form a matching
//! on the current frame.
//!
//! Reproducibility contract: one seeded generator per trial, and nodes
//! are processed in ascending ID order in every phase, so identical
//! inputs and seed give bit-identical records and traces.

use std::collections::BTreeSet;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, Graph, NodeId};
use crate::matching::{bridge, max_matching};

/// Proposal strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Informed nodes propose to a uniformly random neighbor.
    Push,
    /// Restricted pull: uninformed nodes propose to a uniformly random
    /// neighbor; informed nodes are receptive.
    Rpull,
    /// Alternates PUSH (round 1, 3, ...) and RPULL (round 2, 4, ...).
    PushPullAlt,
    /// Productive push: informed nodes advertise a 1-bit informed flag
    /// and propose to a uniformly random neighbor whose tag reads
    /// uninformed; nodes with no such neighbor stay idle.
    Ppush,
    /// Centralized oracle: realizes a maximum matching between informed
    /// and uninformed nodes each round.
    MatchGreedy,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Push => "push",
            Strategy::Rpull => "rpull",
            Strategy::PushPullAlt => "pushpull",
            Strategy::Ppush => "ppush",
            Strategy::MatchGreedy => "matchgreedy",
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "push" => Ok(Strategy::Push),
            "rpull" => Ok(Strategy::Rpull),
            "pushpull" => Ok(Strategy::PushPullAlt),
            "ppush" => Ok(Strategy::Ppush),
            "matchgreedy" => Ok(Strategy::MatchGreedy),
            other => Err(Error::InvalidSpec(format!("unknown protocol {other:?}"))),
        }
    }
}

/// How an acceptor picks among concurrent incoming proposals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Resolution {
    /// Uniformly random incoming proposal.
    Random,
    /// Lowest proposer ID.
    FirstById,
    /// Greedy adversary heuristic: prefer an unproductive proposer (one
    /// with the same informed status as the acceptor) if any, else the
    /// lowest ID. The model's adversary is existential; this is one
    /// concrete instantiation.
    AdversarialMin,
}

impl Resolution {
    pub fn name(&self) -> &'static str {
        match self {
            Resolution::Random => "random",
            Resolution::FirstById => "first-by-id",
            Resolution::AdversarialMin => "adversarial-min",
        }
    }
}

impl std::fmt::Display for Resolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Resolution {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Resolution::Random),
            "first-by-id" => Ok(Resolution::FirstById),
            "adversarial-min" => Ok(Resolution::AdversarialMin),
            other => Err(Error::InvalidSpec(format!("unknown resolution policy {other:?}"))),
        }
    }
}

/// Whether an acceptor takes one connection (the mobile telephone model)
/// or unboundedly many (the classical-model comparison baseline).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AcceptanceCap {
    One,
    Unbounded,
}

impl AcceptanceCap {
    pub fn name(&self) -> &'static str {
        match self {
            AcceptanceCap::One => "one",
            AcceptanceCap::Unbounded => "unbounded",
        }
    }
}

impl std::fmt::Display for AcceptanceCap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AcceptanceCap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" => Ok(AcceptanceCap::One),
            "unbounded" => Ok(AcceptanceCap::Unbounded),
            other => Err(Error::InvalidSpec(format!("unknown acceptance cap {other:?}"))),
        }
    }
}

/// A complete protocol configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProtocolSpec {
    pub strategy: Strategy,
    /// Advertised tag width in bits.
    pub tag_bits: u32,
    pub resolution: Resolution,
    pub cap: AcceptanceCap,
}

impl ProtocolSpec {
    /// Default-configured spec for a strategy: PPUSH advertises one bit,
    /// the blind protocols none; random resolution; single acceptance.
    pub fn new(strategy: Strategy) -> Self {
        let tag_bits = if strategy == Strategy::Ppush { 1 } else { 0 };
        ProtocolSpec { strategy, tag_bits, resolution: Resolution::Random, cap: AcceptanceCap::One }
    }

    pub fn push() -> Self {
        Self::new(Strategy::Push)
    }

    pub fn rpull() -> Self {
        Self::new(Strategy::Rpull)
    }

    pub fn pushpull_alt() -> Self {
        Self::new(Strategy::PushPullAlt)
    }

    pub fn ppush() -> Self {
        Self::new(Strategy::Ppush)
    }

    pub fn match_greedy() -> Self {
        Self::new(Strategy::MatchGreedy)
    }

    pub fn with_resolution(mut self, resolution: Resolution) -> Self {
        self.resolution = resolution;
        self
    }

    pub fn with_cap(mut self, cap: AcceptanceCap) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_tag_bits(mut self, tag_bits: u32) -> Self {
        self.tag_bits = tag_bits;
        self
    }

    /// PPUSH needs at least one advertised bit; the blind protocols run
    /// with none; MATCH_GREEDY is a centralized oracle and ignores tags
    /// and resolution.
    pub fn validate(&self) -> Result<()> {
        match self.strategy {
            Strategy::Ppush if self.tag_bits < 1 => {
                Err(Error::InvalidSpec("ppush requires tag_bits >= 1".into()))
            }
            Strategy::Push | Strategy::Rpull | Strategy::PushPullAlt if self.tag_bits != 0 => {
                Err(Error::InvalidSpec(format!(
                    "{} runs with tag_bits = 0, got {}",
                    self.strategy, self.tag_bits
                )))
            }
            _ => Ok(()),
        }
    }
}

/// Per-round protocol state over a fixed vertex set.
#[derive(Debug, Clone)]
pub struct SimState {
    /// 1-indexed number of the next round to execute.
    round: u64,
    informed: Vec<bool>,
    informed_count: usize,
    /// Tags published in the advertise phase of the current round.
    tags: Vec<u64>,
    /// Per-node count of neighbors uninformed at the start of the round;
    /// rebuilt lazily after a frame change.
    uninformed_nbrs: Vec<u32>,
    counts_valid: bool,
}

impl SimState {
    /// Fresh state with a single informed source.
    pub fn new(n: usize, source: NodeId) -> Result<Self> {
        Self::with_informed(n, &[source])
    }

    /// State with an arbitrary nonempty informed set (for protocol
    /// analysis from mid-run configurations).
    pub fn with_informed(n: usize, informed_set: &[NodeId]) -> Result<Self> {
        if informed_set.is_empty() {
            return Err(Error::InvalidParams("informed set must be nonempty".into()));
        }
        let mut informed = vec![false; n];
        for &v in informed_set {
            if v as usize >= n {
                return Err(Error::InvalidParams(format!("node {v} out of range")));
            }
            informed[v as usize] = true;
        }
        let informed_count = informed.iter().filter(|&&b| b).count();
        Ok(SimState {
            round: 1,
            informed,
            informed_count,
            tags: vec![0; n],
            uninformed_nbrs: vec![0; n],
            counts_valid: false,
        })
    }

    pub fn n(&self) -> usize {
        self.informed.len()
    }

    /// The next round to execute (1-indexed).
    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn informed_count(&self) -> usize {
        self.informed_count
    }

    pub fn is_informed(&self, v: NodeId) -> bool {
        self.informed[v as usize]
    }

    pub fn is_complete(&self) -> bool {
        self.informed_count == self.n()
    }

    /// Sorted informed set.
    pub fn informed_set(&self) -> Vec<NodeId> {
        (0..self.n() as NodeId).filter(|&v| self.informed[v as usize]).collect()
    }

    /// Tag advertised by `v` this round (valid after the advertise phase).
    pub fn tag(&self, v: NodeId) -> u64 {
        self.tags[v as usize]
    }

    /// Must be called when the topology frame changes between rounds.
    pub fn frame_changed(&mut self) {
        self.counts_valid = false;
    }

    fn rebuild_counts(&mut self, frame: &Graph) {
        for v in 0..self.n() {
            self.uninformed_nbrs[v] = frame
                .neighbors(v as NodeId)
                .iter()
                .filter(|&&w| !self.informed[w as usize])
                .count() as u32;
        }
        self.counts_valid = true;
    }
}

/// What happened in one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundOutcome {
    /// `(proposer, target)` pairs in ascending proposer order.
    pub proposals: Vec<(NodeId, NodeId)>,
    /// Realized `(proposer, acceptor)` connections, ascending by proposer.
    pub connections: Vec<(NodeId, NodeId)>,
    /// Nodes that learned the rumor this round, sorted.
    pub newly_informed: Vec<NodeId>,
}

/// Executes one round: advertise, propose, resolve, communicate.
///
/// The frame must match the state's vertex count. If the caller switched
/// frames since the previous round it must call
/// [`SimState::frame_changed`] first.
pub fn run_round(
    state: &mut SimState,
    frame: &Graph,
    spec: &ProtocolSpec,
    rng: &mut ChaCha8Rng,
) -> Result<RoundOutcome> {
    spec.validate()?;
    if state.n() != frame.n() {
        return Err(Error::FrameMismatch(format!(
            "state has {} vertices, frame has {}",
            state.n(),
            frame.n()
        )));
    }
    // advertise: tags reflect start-of-round informed status
    if spec.tag_bits >= 1 {
        for v in 0..state.n() {
            state.tags[v] = u64::from(state.informed[v]);
        }
    } else {
        state.tags.fill(0);
    }
    if !state.counts_valid {
        state.rebuild_counts(frame);
    }

    // propose
    let proposals = match spec.strategy {
        Strategy::Push => propose_blind(state, frame, rng, true),
        Strategy::Rpull => propose_blind(state, frame, rng, false),
        Strategy::PushPullAlt => {
            let push_round = state.round % 2 == 1;
            propose_blind(state, frame, rng, push_round)
        }
        Strategy::Ppush => propose_productive(state, frame, rng),
        Strategy::MatchGreedy => Vec::new(),
    };

    // resolve
    let connections = if spec.strategy == Strategy::MatchGreedy {
        match_greedy_connections(state, frame)
    } else {
        resolve_proposals(&proposals, &state.informed, spec.resolution, spec.cap, rng)
    };
    let proposals = if spec.strategy == Strategy::MatchGreedy {
        // the oracle's matching doubles as its proposal set
        connections.clone()
    } else {
        proposals
    };

    // communicate: transfer wherever exactly one endpoint was informed at
    // the start of the round
    let mut newly = BTreeSet::new();
    for &(p, a) in &connections {
        match (state.informed[p as usize], state.informed[a as usize]) {
            (true, false) => {
                newly.insert(a);
            }
            (false, true) => {
                newly.insert(p);
            }
            _ => {}
        }
    }
    let newly_informed: Vec<NodeId> = newly.into_iter().collect();
    for &v in &newly_informed {
        state.informed[v as usize] = true;
        state.informed_count += 1;
        if state.counts_valid {
            for &w in frame.neighbors(v) {
                state.uninformed_nbrs[w as usize] -= 1;
            }
        }
    }
    state.round += 1;
    Ok(RoundOutcome { proposals, connections, newly_informed })
}

/// PUSH / RPULL proposal step: the active side (informed for PUSH,
/// uninformed for RPULL) proposes to a uniformly random neighbor.
fn propose_blind(
    state: &SimState,
    frame: &Graph,
    rng: &mut ChaCha8Rng,
    informed_proposes: bool,
) -> Vec<(NodeId, NodeId)> {
    let mut proposals = Vec::new();
    for u in 0..state.n() {
        if state.informed[u] != informed_proposes {
            continue;
        }
        let nbrs = frame.neighbors(u as NodeId);
        if nbrs.is_empty() {
            continue;
        }
        let v = nbrs[rng.random_range(0..nbrs.len())];
        proposals.push((u as NodeId, v));
    }
    proposals
}

/// Attempts of neighbor rejection sampling before falling back to an
/// index scan; both paths draw uniformly among tag-uninformed neighbors.
const PPUSH_SAMPLE_TRIES: u32 = 16;

/// PPUSH proposal step: informed nodes with at least one tag-uninformed
/// neighbor propose to one such neighbor uniformly at random; the rest
/// stay idle.
fn propose_productive(
    state: &SimState,
    frame: &Graph,
    rng: &mut ChaCha8Rng,
) -> Vec<(NodeId, NodeId)> {
    let mut proposals = Vec::new();
    for u in 0..state.n() {
        if !state.informed[u] {
            continue;
        }
        let candidates = state.uninformed_nbrs[u];
        if candidates == 0 {
            continue;
        }
        let nbrs = frame.neighbors(u as NodeId);
        let mut target = None;
        for _ in 0..PPUSH_SAMPLE_TRIES {
            let v = nbrs[rng.random_range(0..nbrs.len())];
            if state.tags[v as usize] & 1 == 0 {
                target = Some(v);
                break;
            }
        }
        let v = target.unwrap_or_else(|| {
            let mut k = rng.random_range(0..candidates);
            *nbrs
                .iter()
                .find(|&&v| {
                    if state.tags[v as usize] & 1 == 0 {
                        if k == 0 {
                            return true;
                        }
                        k -= 1;
                    }
                    false
                })
                .expect("uninformed neighbor count is positive")
        });
        proposals.push((u as NodeId, v));
    }
    proposals
}

fn match_greedy_connections(state: &SimState, frame: &Graph) -> Vec<(NodeId, NodeId)> {
    if state.is_complete() {
        return Vec::new();
    }
    let informed = state.informed_set();
    let b = bridge(frame, &informed).expect("informed set is nonempty and proper");
    max_matching(&b).pairs
}

/// Resolves raw `(proposer, target)` proposals into connections.
///
/// Proposals to nodes that themselves proposed are dropped. Every other
/// target accepts one proposal per the policy, or all of them under
/// [`AcceptanceCap::Unbounded`]. Targets are processed in ascending ID
/// order and the result is sorted by proposer.
pub fn resolve_proposals(
    proposals: &[(NodeId, NodeId)],
    informed: &[bool],
    policy: Resolution,
    cap: AcceptanceCap,
    rng: &mut ChaCha8Rng,
) -> Vec<(NodeId, NodeId)> {
    let mut proposed = vec![false; informed.len()];
    for &(p, _) in proposals {
        proposed[p as usize] = true;
    }
    // group by target, proposers ascending
    let mut incoming: Vec<(NodeId, NodeId)> =
        proposals.iter().map(|&(p, t)| (t, p)).filter(|&(t, _)| !proposed[t as usize]).collect();
    incoming.sort_unstable();

    let mut connections = Vec::new();
    let mut i = 0;
    while i < incoming.len() {
        let target = incoming[i].0;
        let mut j = i;
        while j < incoming.len() && incoming[j].0 == target {
            j += 1;
        }
        let group = &incoming[i..j];
        match cap {
            AcceptanceCap::Unbounded => {
                connections.extend(group.iter().map(|&(t, p)| (p, t)));
            }
            AcceptanceCap::One => {
                let chosen = match policy {
                    Resolution::Random => {
                        if group.len() == 1 {
                            group[0].1
                        } else {
                            group[rng.random_range(0..group.len())].1
                        }
                    }
                    Resolution::FirstById => group[0].1,
                    Resolution::AdversarialMin => group
                        .iter()
                        .map(|&(_, p)| p)
                        .find(|&p| informed[p as usize] == informed[target as usize])
                        .unwrap_or(group[0].1),
                };
                connections.push((chosen, target));
            }
        }
        i = j;
    }
    connections.sort_unstable();
    connections
}

/// One round of a recorded trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub t: u64,
    /// Informed count at the end of the round.
    pub informed: u64,
    pub proposals: Vec<(NodeId, NodeId)>,
    pub connections: Vec<(NodeId, NodeId)>,
    pub new: Vec<NodeId>,
}

/// Result of one complete trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub seed: u64,
    /// Rounds to completion, or `max_rounds` if the trial timed out.
    pub rounds: u64,
    pub completed: bool,
    /// `informed_counts[t]` is the informed count after round `t`;
    /// index 0 holds the initial count.
    pub informed_counts: Vec<u64>,
    pub trace: Option<Vec<RoundRecord>>,
}

/// Runs rounds until every node is informed or `max_rounds` is reached.
/// A timeout is a recorded outcome, not an error. Bit-identical output
/// for identical `(dg, source, spec, seed)`.
pub fn run_trial(
    dg: &DynamicGraph,
    source: NodeId,
    spec: &ProtocolSpec,
    seed: u64,
    max_rounds: u64,
    record_trace: bool,
) -> Result<TrialRecord> {
    spec.validate()?;
    if max_rounds < 1 {
        return Err(Error::InvalidParams("max_rounds must be >= 1".into()));
    }
    let n = dg.n();
    let mut state = SimState::new(n, source)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut informed_counts = vec![state.informed_count() as u64];
    let mut trace = record_trace.then(Vec::new);

    if state.is_complete() {
        return Ok(TrialRecord { seed, rounds: 0, completed: true, informed_counts, trace });
    }

    let mut frame = dg.frame(1);
    let mut interval = dg.tau().interval_index(1);
    let mut completed_at = None;
    for t in 1..=max_rounds {
        let now = dg.tau().interval_index(t);
        if now != interval {
            interval = now;
            frame = dg.frame(t);
            state.frame_changed();
        }
        let outcome = run_round(&mut state, frame.as_ref(), spec, &mut rng)?;
        informed_counts.push(state.informed_count() as u64);
        if let Some(trace) = trace.as_mut() {
            trace.push(RoundRecord {
                t,
                informed: state.informed_count() as u64,
                proposals: outcome.proposals,
                connections: outcome.connections,
                new: outcome.newly_informed,
            });
        }
        if state.is_complete() {
            completed_at = Some(t);
            break;
        }
    }
    Ok(TrialRecord {
        seed,
        rounds: completed_at.unwrap_or(max_rounds),
        completed: completed_at.is_some(),
        informed_counts,
        trace,
    })
}

/// Default round budget for a graph of `n` nodes, far above every bound
/// the protocols exercise.
pub fn default_max_rounds(n: usize) -> u64 {
    64 * n as u64
}
