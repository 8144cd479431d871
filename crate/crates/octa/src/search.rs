//! Case-decomposed branch-and-prune enumeration for small octahedral
//! systems without isolated vertex.
//!
//! A case fixes `(l, b, j)`: the number of edges containing the base
//! transversal `*00...0`, the number of small-table rows with odd parity,
//! and the minimum number of edges covering any colour-0 point. After
//! normalization the search adds one edge at a time: first repairing
//! small-table entries (branching over the few edges that flip a given
//! entry), then repairing isolated edges, and only as a last resort
//! branching freely. Two predictors prune partial systems that cannot reach
//! the target size, and partial systems that leave the subcase are cut.
//!
//! The search is deterministic: child lists are in fixed lexicographic
//! order, budgets are split statically over the first-branch subtrees, and
//! certificates merge in subtree order, so verdicts and statistics are
//! identical regardless of worker count. Suspended runs checkpoint the
//! branch trail and replay it on resume.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Edge, EdgeSet, PointRef, Shape};
use crate::tables::{RowSelection, SmallTable, TrackedSystem};
use crate::verify::{has_isolated_vertex, is_octahedral_system};

/// Format version of certificates and checkpoints.
pub const CERTIFICATE_VERSION: u32 = 1;

/// One search case: `(l, b, j)` plus the edge-count target to refute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseParams {
    d: usize,
    l: usize,
    b: usize,
    j: usize,
    target: usize,
}

impl CaseParams {
    pub fn new(shape: Shape, l: usize, b: usize, j: usize, target: usize) -> Result<Self> {
        let d = shape.d();
        let ok = (1..=d).contains(&l)
            && (1..=d).contains(&b)
            && (1..=d).contains(&j)
            && j + b >= d + 1
            && l <= d - 1
            && target >= 1;
        if !ok {
            return Err(Error::OutOfRange {
                what: "case parameters (l, b, j)",
                value: (l * 100 + b * 10 + j) as u64,
                bound: d as u64 + 1,
            });
        }
        Ok(CaseParams { d, l, b, j, target })
    }

    pub fn shape(&self) -> Shape {
        Shape::new(self.d).expect("validated")
    }

    pub fn d(&self) -> usize {
        self.d
    }
    pub fn l(&self) -> usize {
        self.l
    }
    pub fn b(&self) -> usize {
        self.b
    }
    pub fn j(&self) -> usize {
        self.j
    }
    pub fn target(&self) -> usize {
        self.target
    }

    pub fn triple(&self) -> (usize, usize, usize) {
        (self.l, self.b, self.j)
    }
}

/// Lower bound on the edge count of a system in case `(l, b, j)`:
/// `max(j(d+1), (b+l)(d+1) - 2bl, dl + 1)`, the last term only under the
/// side condition `l >= (d+2)/2` (colour 0 chosen to minimize `l`).
pub fn case_lower_bound(shape: Shape, l: usize, b: usize, j: usize) -> usize {
    let d = shape.d();
    let coverage = j * (d + 1);
    // (b+l)(d+1) - 2bl rearranged into nonnegative parts
    let table = b * (d + 1 - l) + l * (d + 1 - b);
    let minimal_l = if 2 * l >= d + 2 { d * l + 1 } else { 0 };
    coverage.max(table).max(minimal_l)
}

/// All cases whose lower bound does not exceed `target`, ordered by
/// `l` descending, then `b` descending, then `j` descending.
pub fn generate_cases(shape: Shape, target: usize) -> Vec<CaseParams> {
    let d = shape.d();
    let mut cases = Vec::new();
    if d < 2 {
        return cases;
    }
    for l in (1..=d - 1).rev() {
        for b in (1..=d).rev() {
            for j in (1..=d).rev() {
                if j + b < d + 1 {
                    continue;
                }
                if case_lower_bound(shape, l, b, j) <= target {
                    cases.push(CaseParams { d, l, b, j, target });
                }
            }
        }
    }
    cases
}

/// Phase of a search node, recomputed from its state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Phase {
    /// The small table disagrees with the designation at this entry.
    TableRepair { row: usize, column: usize },
    /// The partial system has this isolated edge (lexicographically first).
    IsolatedRepair { edge: Edge },
    /// Table correct and no isolated edge to repair.
    Free,
}

/// Verdict of the predictor prune.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PruneVerdict {
    Keep,
    Cut(PruneReason),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PruneReason {
    /// Some colour has more uncovered points than edges left in the budget.
    PredictorUncovered,
    /// The colour-0 coverage deficits total more than the remaining budget.
    PredictorUndercount,
    /// Every colour-0 point is already covered more than `j` times.
    SubcaseExclusion,
}

/// A partial system under one case: the edge set with its table, the odd-row
/// designation, and the free-branching watermark.
#[derive(Clone)]
pub struct SearchNode {
    case: CaseParams,
    designation: RowSelection,
    sys: TrackedSystem,
    free_watermark: Option<u32>,
    depth: u32,
    trail: Vec<u32>,
}

impl SearchNode {
    pub fn case(&self) -> &CaseParams {
        &self.case
    }

    pub fn partial(&self) -> &EdgeSet {
        self.sys.edges()
    }

    pub fn small_table(&self) -> SmallTable {
        self.sys.small_table()
    }

    pub fn designation(&self) -> &RowSelection {
        &self.designation
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Branch trail from the case root (child indices).
    pub fn trail(&self) -> &[u32] {
        &self.trail
    }

    /// An edge `x00...0` is forbidden when `x >= l`: the normalization fixes
    /// the base-transversal edges to exactly `x < l`.
    fn is_forbidden(&self, code: u32) -> bool {
        code_is_base_form(self.case.shape(), code)
            && (code_base_digit(self.case.shape(), code) as usize) >= self.case.l
    }

    pub fn phase(&self) -> Phase {
        let table = self.sys.small_table();
        if let Some((row, column)) = table.first_mismatch(&self.designation) {
            return Phase::TableRepair { row, column };
        }
        let d = self.case.d;
        if self.case.target <= d * d {
            if let Some(edge) = first_isolated_edge(self.sys.edges()) {
                return Phase::IsolatedRepair { edge };
            }
        }
        Phase::Free
    }

    /// The two predictors and the subcase-exclusion test.
    pub fn prune(&self) -> PruneVerdict {
        let shape = self.case.shape();
        let set = self.sys.edges();
        let size = set.len();

        let mut worst_uncovered = 0usize;
        for colour in 0..shape.colours() {
            let mut uncovered = 0usize;
            for index in 0..shape.points_per_colour() {
                let p = PointRef {
                    colour: colour as u8,
                    index: index as u8,
                };
                if set.incidence(p) == 0 {
                    uncovered += 1;
                }
            }
            worst_uncovered = worst_uncovered.max(uncovered);
        }
        if size + worst_uncovered > self.case.target {
            return PruneVerdict::Cut(PruneReason::PredictorUncovered);
        }

        let mut deficit = 0usize;
        let mut min_coverage = usize::MAX;
        for index in 0..shape.points_per_colour() {
            let p = PointRef {
                colour: 0,
                index: index as u8,
            };
            let coverage = set.incidence(p) as usize;
            min_coverage = min_coverage.min(coverage);
            deficit += self.case.j.saturating_sub(coverage);
        }
        if size + deficit > self.case.target {
            return PruneVerdict::Cut(PruneReason::PredictorUndercount);
        }
        if min_coverage > self.case.j {
            return PruneVerdict::Cut(PruneReason::SubcaseExclusion);
        }
        PruneVerdict::Keep
    }

    /// Candidate edges that flip exactly the given small-table entry: the
    /// colour-0 digit equals the column and every other digit is 0 or the
    /// row value, excluding present and forbidden edges. With
    /// `first_branch`, only the weight representatives (row value in the
    /// first `w` slots) survive, justified by permuting colours `1..d`.
    pub fn repair_candidates(
        &self,
        mismatch: (usize, usize),
        first_branch: bool,
    ) -> Vec<u32> {
        let (row, column) = mismatch;
        let shape = self.case.shape();
        let d = shape.d();
        let mut out = Vec::new();
        if first_branch {
            let mut digits = vec![0u8; d + 1];
            digits[0] = column as u8;
            for weight in 1..=d {
                digits[weight] = row as u8;
                let code = Edge::new(shape, &digits).expect("in range").code();
                if !self.sys.edges().contains_code(code) && !self.is_forbidden(code) {
                    out.push(code);
                }
            }
            return out;
        }
        for pick in 1u32..(1 << d) {
            let mut digits = vec![0u8; d + 1];
            digits[0] = column as u8;
            for slot in 0..d {
                if pick >> slot & 1 == 1 {
                    digits[slot + 1] = row as u8;
                }
            }
            let code = Edge::new(shape, &digits).expect("in range").code();
            if !self.sys.edges().contains_code(code) && !self.is_forbidden(code) {
                out.push(code);
            }
        }
        out.sort_unstable();
        out
    }

    /// Candidate edges repairing an isolated edge: its Hamming-1 neighbours,
    /// excluding present and forbidden edges.
    pub fn isolated_candidates(&self, isolated: &Edge) -> Vec<u32> {
        isolated
            .adjacent_edges()
            .iter()
            .map(Edge::code)
            .filter(|&c| !self.sys.edges().contains_code(c) && !self.is_forbidden(c))
            .collect()
    }

    /// Free-branching candidates: every absent, non-forbidden edge above the
    /// watermark, in canonical order.
    pub fn free_candidates(&self) -> Vec<u32> {
        let shape = self.case.shape();
        let start = self.free_watermark.map_or(0, |w| w + 1);
        (start..shape.edge_space() as u32)
            .filter(|&c| !self.sys.edges().contains_code(c) && !self.is_forbidden(c))
            .collect()
    }

    /// Child node extended by one edge.
    fn child(&self, code: u32, child_index: u32, free_pick: bool) -> SearchNode {
        let shape = self.case.shape();
        let edge = Edge::from_code(shape, code).expect("in range");
        let mut node = self.clone();
        node.sys.add(&edge).expect("candidate absent");
        node.depth += 1;
        node.trail.push(child_index);
        if free_pick {
            node.free_watermark = Some(code);
        }
        node
    }

    /// One child per admissible edge flipping exactly the given entry.
    pub fn branch_table_fix(&self, mismatch: (usize, usize), first_branch: bool) -> Vec<SearchNode> {
        self.repair_candidates(mismatch, first_branch)
            .iter()
            .enumerate()
            .map(|(i, &code)| self.child(code, i as u32, false))
            .collect()
    }

    /// One child per admissible neighbour of the first isolated edge.
    pub fn branch_isolated(&self) -> Vec<SearchNode> {
        let Phase::IsolatedRepair { edge } = self.phase() else {
            return Vec::new();
        };
        self.isolated_candidates(&edge)
            .iter()
            .enumerate()
            .map(|(i, &code)| self.child(code, i as u32, false))
            .collect()
    }

    /// One child per absent, non-forbidden edge above the watermark; no
    /// children beyond the target size.
    pub fn branch_free(&self) -> Vec<SearchNode> {
        if self.partial().len() >= self.case.target {
            return Vec::new();
        }
        self.free_candidates()
            .iter()
            .enumerate()
            .map(|(i, &code)| self.child(code, i as u32, true))
            .collect()
    }

    /// Leaf test: Property 1, score 0 plus full Property 2, size within
    /// target, and case consistency (small table matches the designation,
    /// minimum colour-0 coverage exactly `j`).
    pub fn is_qualifying_leaf(&self) -> bool {
        leaf_qualifies(&self.sys, &self.case, &self.designation)
    }
}

fn code_is_base_form(shape: Shape, code: u32) -> bool {
    // x00...0 codes are exactly the multiples of (d+1)^d below (d+1)^(d+1)
    code % shape.transversals_per_colour() as u32 == 0
}

fn code_base_digit(shape: Shape, code: u32) -> u32 {
    code / shape.transversals_per_colour() as u32
}

fn first_isolated_edge(set: &EdgeSet) -> Option<Edge> {
    set.iter()
        .find(|e| e.adjacent_edges().iter().all(|a| !set.contains(a)))
}

fn leaf_qualifies(sys: &TrackedSystem, case: &CaseParams, designation: &RowSelection) -> bool {
    let shape = case.shape();
    let set = sys.edges();
    if set.len() > case.target {
        return false;
    }
    if !sys.small_table().matches(designation) {
        return false;
    }
    let mut min_coverage = usize::MAX;
    for index in 0..shape.points_per_colour() {
        let p = PointRef {
            colour: 0,
            index: index as u8,
        };
        min_coverage = min_coverage.min(set.incidence(p) as usize);
    }
    if min_coverage != case.j {
        return false;
    }
    if has_isolated_vertex(set).is_some() {
        return false;
    }
    if sys.score().0 != 0 {
        return false;
    }
    is_octahedral_system(set).is_yes()
}

/// The normalized root of a case: the partial system holds exactly the
/// edges `x00...0` for `x < l`; the complementary base-form edges are
/// forbidden throughout the case.
pub fn normalize_initial(case: &CaseParams) -> SearchNode {
    let shape = case.shape();
    let mut set = EdgeSet::new(shape);
    for x in 0..case.l {
        let mut digits = vec![0u8; shape.colours()];
        digits[0] = x as u8;
        set.insert(&Edge::new(shape, &digits).expect("in range"));
    }
    SearchNode {
        case: *case,
        designation: RowSelection::first_rows(shape, case.b),
        sys: TrackedSystem::new(set),
        free_watermark: None,
        depth: 0,
        trail: Vec::new(),
    }
}

/// Search budget: optional node and wall-time limits. Node limits are split
/// statically over the first-branch subtrees (remainder to the earliest),
/// which keeps statistics independent of the worker count.
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(limit: u64) -> Self {
        Budget {
            node_limit: Some(limit),
            time_limit: None,
        }
    }

    fn share(&self, index: usize, count: usize) -> Option<u64> {
        self.node_limit.map(|total| {
            let base = total / count as u64;
            let extra = (index as u64) < total % count as u64;
            base + extra as u64
        })
    }
}

/// Per-search counters. `wall_seconds` is informational and excluded from
/// determinism comparisons.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub prunes_predictor_uncovered: u64,
    pub prunes_predictor_undercount: u64,
    pub prunes_subcase_exclusion: u64,
    pub repair_branches: u64,
    pub isolated_branches: u64,
    pub free_branches: u64,
    pub leaf_checks: u64,
    pub witnesses_found: u64,
    pub wall_seconds: f64,
}

impl SearchStats {
    fn absorb(&mut self, other: &SearchStats) {
        self.nodes_expanded += other.nodes_expanded;
        self.prunes_predictor_uncovered += other.prunes_predictor_uncovered;
        self.prunes_predictor_undercount += other.prunes_predictor_undercount;
        self.prunes_subcase_exclusion += other.prunes_subcase_exclusion;
        self.repair_branches += other.repair_branches;
        self.isolated_branches += other.isolated_branches;
        self.free_branches += other.free_branches;
        self.leaf_checks += other.leaf_checks;
        self.witnesses_found += other.witnesses_found;
        self.wall_seconds += other.wall_seconds;
    }

    /// Equality over every deterministic field (wall time excluded).
    pub fn deterministic_eq(&self, other: &SearchStats) -> bool {
        self.nodes_expanded == other.nodes_expanded
            && self.prunes_predictor_uncovered == other.prunes_predictor_uncovered
            && self.prunes_predictor_undercount == other.prunes_predictor_undercount
            && self.prunes_subcase_exclusion == other.prunes_subcase_exclusion
            && self.repair_branches == other.repair_branches
            && self.isolated_branches == other.isolated_branches
            && self.free_branches == other.free_branches
            && self.leaf_checks == other.leaf_checks
            && self.witnesses_found == other.witnesses_found
    }
}

/// Completion state of one first-branch subtree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SubtreeStatus {
    Exhausted,
    Witness { edges: Vec<Vec<u8>> },
    Suspended { trail: Vec<u32> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubtreeRecord {
    pub root_code: u32,
    #[serde(flatten)]
    pub status: SubtreeStatus,
    pub stats: SearchStats,
}

/// Resumable snapshot of a suspended case search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub case: CaseParams,
    pub first_branch_symmetry: bool,
    pub subtrees: Vec<SubtreeRecord>,
}

/// Outcome of a case search.
#[derive(Clone, Debug, PartialEq)]
pub enum CaseOutcome {
    /// No qualifying system exists anywhere in the case tree.
    Exhausted,
    /// A qualifying system, independently re-verified.
    Witness(EdgeSet),
    /// Budget ran out; the checkpoint resumes the search.
    BudgetExceeded(Box<Checkpoint>),
}

impl CaseOutcome {
    pub fn is_exhausted(&self) -> bool {
        matches!(self, CaseOutcome::Exhausted)
    }
    pub fn witness(&self) -> Option<&EdgeSet> {
        match self {
            CaseOutcome::Witness(w) => Some(w),
            _ => None,
        }
    }
}

/// The machine-checkable record of one case search.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub case: CaseParams,
    pub designation: Vec<usize>,
    pub outcome: CaseOutcome,
    pub stats: SearchStats,
    pub subtrees: Vec<SubtreeRecord>,
}

/// Flow control of the depth-first engine.
enum Flow {
    Dead,
    Witness,
    Suspend(Vec<u32>),
    Corrupt(String),
}

struct Engine {
    case: CaseParams,
    designation: RowSelection,
    first_branch_symmetry: bool,
    sys: TrackedSystem,
    stats: SearchStats,
    node_limit: u64,
    deadline: Option<Instant>,
    witness: Option<EdgeSet>,
}

impl Engine {
    fn new(
        root: &SearchNode,
        first_branch_symmetry: bool,
        node_limit: u64,
        deadline: Option<Instant>,
        carried: SearchStats,
    ) -> Engine {
        Engine {
            case: root.case,
            designation: root.designation,
            first_branch_symmetry,
            sys: root.sys.clone(),
            stats: carried,
            node_limit,
            deadline,
            witness: None,
        }
    }

    fn out_of_budget(&self) -> bool {
        if self.stats.nodes_expanded >= self.node_limit {
            return true;
        }
        matches!(self.deadline, Some(deadline) if Instant::now() >= deadline)
    }

    fn children_of_current(&self, first_branch: bool, watermark: Option<u32>) -> (Vec<u32>, bool) {
        // Returns (children, is_free_pick). Leaf handling happens before.
        let node = self.current_node(watermark);
        match node.phase() {
            Phase::TableRepair { row, column } => {
                (node.repair_candidates((row, column), first_branch), false)
            }
            Phase::IsolatedRepair { edge } => (node.isolated_candidates(&edge), false),
            Phase::Free => (node.free_candidates(), true),
        }
    }

    fn current_node(&self, watermark: Option<u32>) -> SearchNode {
        SearchNode {
            case: self.case,
            designation: self.designation,
            sys: self.sys.clone(),
            free_watermark: watermark,
            depth: 0,
            trail: Vec::new(),
        }
    }

    /// Expands the current state. `resume` carries the remaining replay
    /// trail; replayed nodes were counted in the suspended run and are not
    /// recounted.
    fn dfs(&mut self, watermark: Option<u32>, first_branch: bool, resume: &mut VecDeque<u32>) -> Flow {
        let replaying = !resume.is_empty();
        if !replaying {
            if self.out_of_budget() {
                return Flow::Suspend(Vec::new());
            }
            self.stats.nodes_expanded += 1;
            let node = self.current_node(watermark);
            match node.prune() {
                PruneVerdict::Cut(PruneReason::PredictorUncovered) => {
                    self.stats.prunes_predictor_uncovered += 1;
                    return Flow::Dead;
                }
                PruneVerdict::Cut(PruneReason::PredictorUndercount) => {
                    self.stats.prunes_predictor_undercount += 1;
                    return Flow::Dead;
                }
                PruneVerdict::Cut(PruneReason::SubcaseExclusion) => {
                    self.stats.prunes_subcase_exclusion += 1;
                    return Flow::Dead;
                }
                PruneVerdict::Keep => {}
            }
        }

        let size = self.sys.edges().len();
        let (children, free_pick) = self.children_of_current(first_branch, watermark);

        if free_pick {
            // table correct and no isolated edge: the node itself may qualify
            if !replaying {
                self.stats.leaf_checks += 1;
                if leaf_qualifies(&self.sys, &self.case, &self.designation) {
                    self.stats.witnesses_found += 1;
                    self.witness = Some(self.sys.edges().clone());
                    return Flow::Witness;
                }
            }
        }
        if size >= self.case.target {
            return Flow::Dead; // no room to extend
        }
        if !replaying {
            match (free_pick, children.is_empty()) {
                (false, _) if children.is_empty() => {}
                (false, _) => {
                    // phase recomputation is cheap; split counters by kind
                    let node = self.current_node(watermark);
                    match node.phase() {
                        Phase::TableRepair { .. } => self.stats.repair_branches += 1,
                        Phase::IsolatedRepair { .. } => self.stats.isolated_branches += 1,
                        Phase::Free => {}
                    }
                }
                (true, false) => self.stats.free_branches += 1,
                (true, true) => {}
            }
        }

        let start = if replaying {
            let idx = resume.pop_front().expect("nonempty");
            if idx as usize >= children.len() {
                return Flow::Corrupt(format!(
                    "trail index {idx} out of range ({} children)",
                    children.len()
                ));
            }
            idx as usize
        } else {
            0
        };

        for (idx, &code) in children.iter().enumerate().skip(start) {
            let edge = Edge::from_code(self.case.shape(), code).expect("in range");
            self.sys.add(&edge).expect("candidate absent");
            let child_watermark = if free_pick { Some(code) } else { watermark };
            let mut child_resume = if replaying && idx == start {
                std::mem::take(resume)
            } else {
                VecDeque::new()
            };
            let flow = self.dfs(child_watermark, false, &mut child_resume);
            self.sys.remove(&edge).expect("present");
            match flow {
                Flow::Dead => {}
                Flow::Witness => return Flow::Witness,
                Flow::Suspend(mut trail) => {
                    trail.push(idx as u32);
                    return Flow::Suspend(trail);
                }
                corrupt @ Flow::Corrupt(_) => return corrupt,
            }
        }
        Flow::Dead
    }
}

struct SubtreeTask {
    index: usize,
    root_code: u32,
    limit: u64,
    carried: SearchStats,
    resume_trail: Option<Vec<u32>>,
}

fn run_subtree(
    root: &SearchNode,
    first_branch_symmetry: bool,
    task: &SubtreeTask,
    deadline: Option<Instant>,
) -> Result<SubtreeRecord> {
    let started = Instant::now();
    let mut engine = Engine::new(
        root,
        first_branch_symmetry,
        task.limit,
        deadline,
        task.carried.clone(),
    );
    let shape = root.case.shape();
    let edge = Edge::from_code(shape, task.root_code).expect("in range");
    engine.sys.add(&edge).expect("root candidate absent");
    let mut resume: VecDeque<u32> = task
        .resume_trail
        .clone()
        .map(VecDeque::from)
        .unwrap_or_default();
    let flow = engine.dfs(None, false, &mut resume);
    let mut stats = engine.stats;
    stats.wall_seconds += started.elapsed().as_secs_f64();
    let status = match flow {
        Flow::Dead => SubtreeStatus::Exhausted,
        Flow::Witness => {
            let witness = engine.witness.expect("witness recorded");
            SubtreeStatus::Witness {
                edges: witness.iter().map(|e| e.digits().to_vec()).collect(),
            }
        }
        Flow::Suspend(mut trail) => {
            trail.reverse();
            SubtreeStatus::Suspended { trail }
        }
        Flow::Corrupt(msg) => return Err(Error::CorruptCheckpoint(msg)),
    };
    Ok(SubtreeRecord {
        root_code: task.root_code,
        status,
        stats,
    })
}

fn run_subtree_tasks(
    root: &SearchNode,
    first_branch_symmetry: bool,
    tasks: Vec<SubtreeTask>,
    deadline: Option<Instant>,
    jobs: usize,
) -> Result<Vec<SubtreeRecord>> {
    let mut slots: Vec<Option<Result<SubtreeRecord>>> = Vec::new();
    for _ in 0..tasks.len() {
        slots.push(None);
    }
    if jobs <= 1 || tasks.len() <= 1 {
        for task in &tasks {
            slots[task.index] = Some(run_subtree(root, first_branch_symmetry, task, deadline));
        }
    } else {
        let next = AtomicUsize::new(0);
        let results = Mutex::new(&mut slots);
        std::thread::scope(|scope| {
            for _ in 0..jobs.min(tasks.len()) {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    if i >= tasks.len() {
                        break;
                    }
                    let record = run_subtree(root, first_branch_symmetry, &tasks[i], deadline);
                    results.lock().unwrap()[tasks[i].index] = Some(record);
                });
            }
        });
    }
    slots
        .into_iter()
        .map(|slot| slot.expect("every task ran"))
        .collect()
}

fn assemble_certificate(
    case: &CaseParams,
    designation: &RowSelection,
    first_branch_symmetry: bool,
    subtrees: Vec<SubtreeRecord>,
) -> Certificate {
    let mut stats = SearchStats::default();
    for record in &subtrees {
        stats.absorb(&record.stats);
    }
    let shape = case.shape();
    let witness = subtrees.iter().find_map(|record| match &record.status {
        SubtreeStatus::Witness { edges } => Some(edges.clone()),
        _ => None,
    });
    let outcome = if let Some(edges) = witness {
        let owned: Vec<Edge> = edges
            .iter()
            .map(|digits| Edge::new(shape, digits).expect("stored witness digits valid"))
            .collect();
        let set = EdgeSet::from_edges(shape, &owned);
        verify_witness(case, designation, &set);
        CaseOutcome::Witness(set)
    } else if subtrees
        .iter()
        .any(|r| matches!(r.status, SubtreeStatus::Suspended { .. }))
    {
        CaseOutcome::BudgetExceeded(Box::new(Checkpoint {
            version: CERTIFICATE_VERSION,
            case: *case,
            first_branch_symmetry,
            subtrees: subtrees.clone(),
        }))
    } else {
        CaseOutcome::Exhausted
    };
    Certificate {
        case: *case,
        designation: designation.rows().collect(),
        outcome,
        stats,
        subtrees,
    }
}

/// Independent re-verification of a search witness: no search state is
/// reused, and the realized case parameters must match.
fn verify_witness(case: &CaseParams, designation: &RowSelection, set: &EdgeSet) {
    assert!(set.len() <= case.target, "witness exceeds target");
    assert!(
        has_isolated_vertex(set).is_none(),
        "witness has an isolated vertex"
    );
    assert!(
        is_octahedral_system(set).is_yes(),
        "witness fails the octahedron parity property"
    );
    let shape = case.shape();
    // realized l: edges containing the base transversal
    let realized_l = (0..shape.colours())
        .filter(|&x| {
            let mut digits = vec![0u8; shape.colours()];
            digits[0] = x as u8;
            set.contains(&Edge::new(shape, &digits).expect("in range"))
        })
        .count();
    assert_eq!(realized_l, case.l, "witness realizes a different l");
    let table = crate::tables::build_small_table(set);
    assert!(
        table.matches(designation),
        "witness small table differs from the designation"
    );
    let realized_j = (0..shape.points_per_colour())
        .map(|index| {
            set.incidence(PointRef {
                colour: 0,
                index: index as u8,
            }) as usize
        })
        .min()
        .expect("points exist");
    assert_eq!(realized_j, case.j, "witness realizes a different j");
}

/// Runs one case to exhaustion, witness, or budget.
pub fn run_case(case: &CaseParams, budget: Budget, jobs: usize) -> Result<Certificate> {
    run_case_with_options(case, budget, jobs, true)
}

/// As [`run_case`], optionally disabling the first-branch symmetry
/// reduction (used to validate the representative set on small instances).
pub fn run_case_with_options(
    case: &CaseParams,
    budget: Budget,
    jobs: usize,
    first_branch_symmetry: bool,
) -> Result<Certificate> {
    let root = normalize_initial(case);
    let deadline = budget.time_limit.map(|t| Instant::now() + t);

    // The root is always in table repair (the designated rows cannot match
    // the initial table), so the subtrees are its repair children.
    let Phase::TableRepair { row, column } = root.phase() else {
        unreachable!("initial small table always has a mismatch");
    };
    let children = root.repair_candidates((row, column), first_branch_symmetry);
    let tasks: Vec<SubtreeTask> = children
        .iter()
        .enumerate()
        .map(|(index, &root_code)| SubtreeTask {
            index,
            root_code,
            limit: budget.share(index, children.len()).unwrap_or(u64::MAX),
            carried: SearchStats::default(),
            resume_trail: None,
        })
        .collect();
    let subtrees = run_subtree_tasks(&root, first_branch_symmetry, tasks, deadline, jobs)?;
    Ok(assemble_certificate(
        case,
        &root.designation,
        first_branch_symmetry,
        subtrees,
    ))
}

/// Resumes a suspended case search with an additional budget. Completed
/// subtrees keep their recorded outcomes; suspended subtrees replay their
/// trails and continue counting where they stopped.
pub fn resume_case(checkpoint: &Checkpoint, budget: Budget, jobs: usize) -> Result<Certificate> {
    if checkpoint.version != CERTIFICATE_VERSION {
        return Err(Error::CorruptCheckpoint(format!(
            "unsupported version {}",
            checkpoint.version
        )));
    }
    let case = checkpoint.case;
    CaseParams::new(case.shape(), case.l, case.b, case.j, case.target)?;
    let root = normalize_initial(&case);
    let Phase::TableRepair { row, column } = root.phase() else {
        unreachable!("initial small table always has a mismatch");
    };
    let children = root.repair_candidates((row, column), checkpoint.first_branch_symmetry);
    if children.len() != checkpoint.subtrees.len()
        || checkpoint
            .subtrees
            .iter()
            .zip(&children)
            .any(|(record, &code)| record.root_code != code)
    {
        return Err(Error::CorruptCheckpoint(
            "subtree roots do not match the case".into(),
        ));
    }
    let deadline = budget.time_limit.map(|t| Instant::now() + t);

    let count = checkpoint.subtrees.len();
    let mut finished: Vec<Option<SubtreeRecord>> = vec![None; count];
    let mut tasks = Vec::new();
    for (index, record) in checkpoint.subtrees.iter().enumerate() {
        match &record.status {
            SubtreeStatus::Suspended { trail } => tasks.push(SubtreeTask {
                index,
                root_code: record.root_code,
                limit: record
                    .stats
                    .nodes_expanded
                    .saturating_add(budget.share(index, count).unwrap_or(u64::MAX)),
                carried: record.stats.clone(),
                resume_trail: Some(trail.clone()),
            }),
            _ => finished[index] = Some(record.clone()),
        }
    }
    let resumed = run_subtree_tasks(&root, checkpoint.first_branch_symmetry, tasks, deadline, jobs)?;
    for record in resumed {
        let index = checkpoint
            .subtrees
            .iter()
            .position(|r| r.root_code == record.root_code)
            .expect("matched above");
        finished[index] = Some(record);
    }
    let subtrees: Vec<SubtreeRecord> = finished
        .into_iter()
        .map(|slot| slot.expect("every subtree accounted for"))
        .collect();
    Ok(assemble_certificate(
        &case,
        &root.designation,
        checkpoint.first_branch_symmetry,
        subtrees,
    ))
}

/// Bound-proving verdict over all cases of one target.
#[derive(Clone, Debug)]
pub enum BoundVerdict {
    /// Every case exhausted: no system of size <= target exists, hence
    /// nu(d) >= target + 1.
    Proved { bound: usize },
    /// Some case produced a qualifying system of size <= target.
    Refuted { witness: EdgeSet },
    /// Budgets ran out before every case was decided.
    Inconclusive { unresolved: usize },
}

#[derive(Debug)]
pub struct BoundReport {
    pub d: usize,
    pub target: usize,
    pub verdict: BoundVerdict,
    pub certificates: Vec<Certificate>,
}

/// Runs every generated case for the target; the bound `nu(d) >= target + 1`
/// is claimed only when every case certificate is an exhaustion.
pub fn prove_bound(shape: Shape, target: usize, budget: Budget, jobs: usize) -> Result<BoundReport> {
    let cases = generate_cases(shape, target);
    let mut certificates = Vec::with_capacity(cases.len());
    for case in &cases {
        certificates.push(run_case(case, budget, jobs)?);
    }
    let witness = certificates
        .iter()
        .find_map(|c| c.outcome.witness().cloned());
    let unresolved = certificates
        .iter()
        .filter(|c| matches!(c.outcome, CaseOutcome::BudgetExceeded(_)))
        .count();
    let verdict = if let Some(witness) = witness {
        BoundVerdict::Refuted { witness }
    } else if unresolved > 0 {
        BoundVerdict::Inconclusive { unresolved }
    } else {
        BoundVerdict::Proved { bound: target + 1 }
    };
    Ok(BoundReport {
        d: shape.d(),
        target,
        verdict,
        certificates,
    })
}
