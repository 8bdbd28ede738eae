//! Basic-block identification and the program flow graph.
//!
//! Blocks are found through leader statements over the flattened source
//! order: the first statement is a leader, every statement a branch can
//! transfer control to is a leader, and every target of a non-fall-through
//! transfer (loop back-edges, jumps over an `else` arm) is a leader. A
//! basic block is the maximal statement run from one leader up to the
//! next; control enters a block only at its leader.
//!
//! `if`, `while`, and `for` headers are branch statements; a `for` header
//! owns its init and step clauses, so the whole header is a single
//! statement in the block partition.

use std::collections::BTreeSet;
use std::ops::Range;

use super::ast::{Program, StmtId, StmtKind};

/// A maximal straight-line statement run with a single entry point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicBlock {
    /// 0-based id; block 0 is the entry block.
    pub id: usize,
    /// Flattened source indices of the statements in this block.
    pub stmts: Range<usize>,
    /// False when no edge path from the entry block reaches this block.
    pub reachable: bool,
}

/// Blocks plus directed control-flow edges between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramFlowGraph {
    blocks: Vec<BasicBlock>,
    edges: BTreeSet<(usize, usize)>,
    block_of: Vec<usize>,
}

impl ProgramFlowGraph {
    /// The entry block id (always 0).
    pub fn entry(&self) -> usize {
        0
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[BasicBlock] {
        &self.blocks
    }

    /// Directed block-level edges, deduplicated and ordered.
    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn block_of_stmt(&self, id: StmtId) -> usize {
        self.block_of[id.index()]
    }

    pub fn is_reachable(&self, block: usize) -> bool {
        self.blocks[block].reachable
    }

    /// Labels blocks by their 0-based id.
    pub fn block_labels(&self) -> Vec<String> {
        (0..self.blocks.len()).map(|k| k.to_string()).collect()
    }
}

/// Statement-level control flow: per-statement successor lists.
struct Flow {
    succs: Vec<Vec<usize>>,
}

impl Flow {
    fn compute(program: &Program) -> Flow {
        let mut flow = Flow {
            succs: vec![Vec::new(); program.statement_count()],
        };
        flow.link_body(program, program.top_level(), None);
        flow
    }

    fn push(&mut self, from: StmtId, to: Option<StmtId>) {
        if let Some(to) = to {
            let list = &mut self.succs[from.index()];
            if !list.contains(&to.index()) {
                list.push(to.index());
            }
        }
    }

    /// Wires up `body`, where `follow` is where control goes after the
    /// body completes (the loop header for loop bodies, the join for `if`
    /// arms, nothing at the end of the program).
    fn link_body(&mut self, program: &Program, body: &[StmtId], follow: Option<StmtId>) {
        for (i, &id) in body.iter().enumerate() {
            let next = body.get(i + 1).copied().or(follow);
            match &program.stmt(id).kind {
                StmtKind::Assign { .. } | StmtKind::Print { .. } => {
                    self.push(id, next);
                }
                StmtKind::If {
                    then_body,
                    else_body,
                    ..
                } => {
                    self.push(id, then_body.first().copied().or(next));
                    self.push(id, else_body.first().copied().or(next));
                    self.link_body(program, then_body, next);
                    self.link_body(program, else_body, next);
                }
                StmtKind::While { body, .. } | StmtKind::For { body, .. } => {
                    // An empty loop body re-tests the header immediately.
                    self.push(id, Some(body.first().copied().unwrap_or(id)));
                    self.push(id, next);
                    self.link_body(program, body, Some(id));
                }
            }
        }
    }
}

/// Partitions the program into leader-delimited basic blocks and derives
/// the block-level edge set.
pub fn build_cfg(program: &Program) -> ProgramFlowGraph {
    let n = program.statement_count();
    let flow = Flow::compute(program);

    let mut leaders = BTreeSet::new();
    leaders.insert(0usize);
    for s in 0..n {
        let is_branch = program.stmt(StmtId(s)).is_branch();
        for &t in &flow.succs[s] {
            if is_branch || t != s + 1 {
                leaders.insert(t);
            }
        }
    }

    let starts: Vec<usize> = leaders.into_iter().collect();
    let mut blocks = Vec::with_capacity(starts.len());
    let mut block_of = vec![0usize; n];
    for (id, &start) in starts.iter().enumerate() {
        let end = starts.get(id + 1).copied().unwrap_or(n);
        block_of[start..end].fill(id);
        blocks.push(BasicBlock {
            id,
            stmts: start..end,
            reachable: false,
        });
    }

    let mut edges = BTreeSet::new();
    for block in &blocks {
        debug_assert!(block
            .stmts
            .clone()
            .take(block.stmts.len().saturating_sub(1))
            .all(|s| flow.succs[s] == [s + 1]));
        let last = block.stmts.end - 1;
        for &t in &flow.succs[last] {
            edges.insert((block.id, block_of[t]));
        }
    }

    let mut worklist = vec![0usize];
    let mut seen = vec![false; blocks.len()];
    seen[0] = true;
    while let Some(b) = worklist.pop() {
        blocks[b].reachable = true;
        for &(from, to) in edges.range((b, 0)..=(b, usize::MAX)) {
            debug_assert_eq!(from, b);
            if !seen[to] {
                seen[to] = true;
                worklist.push(to);
            }
        }
    }

    ProgramFlowGraph {
        blocks,
        edges,
        block_of,
    }
}
