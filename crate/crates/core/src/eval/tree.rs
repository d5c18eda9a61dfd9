//! Tree-based action evaluation.
//!
//! Rules are processed from most to least relevant. Each rule specializes
//! every open node whose accumulated command is compatible with the rule's
//! command: the node is either extended on a motor the rule fixes but the
//! path does not, or converted into a leaf carrying the rule's value, guess,
//! and relevance. Construction stops as soon as every node is closed; the
//! remaining rules cannot win any action and are never touched.

use crate::types::{ElementaryAction, PartialCommand};

use super::{EvalEntry, EvaluationResult};

#[derive(Debug, Clone)]
enum Node {
    /// Not yet decided: `path` collects the motor values fixed from the root.
    Open { path: PartialCommand },
    /// Splits on `motor`; `children[k]` handles value `k`.
    Internal { motor: usize, children: Vec<usize> },
    /// All actions under this node share one winner; its figures live in
    /// the builder's leaf list.
    Leaf,
}

/// One finished leaf: the actions it covers and the figures of the rule
/// that closed it.
#[derive(Debug, Clone)]
pub struct LeafInfo {
    /// Path command from the root; motors it leaves open are wildcards.
    pub cover: PartialCommand,
    pub q: f64,
    pub guess: f64,
    pub relevance: f64,
    /// Index of the winning rule in the entry slice.
    pub entry: usize,
}

#[derive(Debug, Clone)]
pub struct TreeEvaluation {
    pub result: EvaluationResult,
    /// Rules consumed before the tree closed.
    pub rules_processed: usize,
    /// All leaves; their covers partition the action space.
    pub leaves: Vec<LeafInfo>,
    /// Most distinct nodes visited by a single rule insertion.
    pub max_nodes_visited: usize,
    /// Nodes created over the whole construction.
    pub nodes_created: usize,
}

struct TreeBuilder<'a, 'e> {
    entries: &'a [EvalEntry<'e>],
    motor_ranges: &'a [usize],
    nodes: Vec<Node>,
    open: usize,
    closed: usize,
    visited: usize,
    value: f64,
    best_guess: f64,
    best_leaf: Option<usize>,
    leaves: Vec<LeafInfo>,
}

impl<'a, 'e> TreeBuilder<'a, 'e> {
    fn new(entries: &'a [EvalEntry<'e>], motor_ranges: &'a [usize]) -> Self {
        Self {
            entries,
            motor_ranges,
            nodes: vec![Node::Open { path: PartialCommand::empty() }],
            open: 1,
            closed: 0,
            visited: 0,
            value: f64::NEG_INFINITY,
            best_guess: f64::NEG_INFINITY,
            best_leaf: None,
            leaves: Vec::new(),
        }
    }

    /// Lexicographically minimal action covered by a leaf (wildcards at 0),
    /// used to break exact guess ties the same way the brute-force
    /// evaluator does.
    fn min_completion(&self, leaf: usize) -> Vec<usize> {
        let cover = &self.leaves[leaf].cover;
        (0..self.motor_ranges.len())
            .map(|m| cover.value_for(m).unwrap_or(0))
            .collect()
    }

    fn to_leaf(&mut self, node: usize, entry_idx: usize) {
        let path = match &self.nodes[node] {
            Node::Open { path } => path.clone(),
            _ => unreachable!("only open nodes become leaves"),
        };
        let entry = &self.entries[entry_idx];
        self.leaves.push(LeafInfo {
            cover: path,
            q: entry.q,
            guess: entry.guess,
            relevance: entry.relevance,
            entry: entry_idx,
        });
        let leaf = self.leaves.len() - 1;
        self.nodes[node] = Node::Leaf;
        self.closed += 1;

        if entry.q > self.value {
            self.value = entry.q;
        }
        let replace = match self.best_leaf {
            None => true,
            Some(current) => {
                entry.guess > self.best_guess
                    || (entry.guess == self.best_guess
                        && self.min_completion(leaf) < self.min_completion(current))
            }
        };
        if replace {
            self.best_guess = entry.guess;
            self.best_leaf = Some(leaf);
        }
    }

    fn include(&mut self, mut node: usize, entry_idx: usize) {
        self.visited += 1;
        let command = self.entries[entry_idx].command;
        loop {
            match &self.nodes[node] {
                Node::Leaf => return,
                Node::Internal { motor, children } => {
                    match command.value_for(*motor) {
                        Some(v) => {
                            // The rule fixes this motor: only one branch is
                            // compatible.
                            node = children[v];
                            self.visited += 1;
                        }
                        None => {
                            let children = children.clone();
                            for child in children {
                                self.include(child, entry_idx);
                            }
                            return;
                        }
                    }
                }
                Node::Open { path } => {
                    // First motor the rule fixes that the path does not;
                    // assignments are sorted, so this picks the lowest index.
                    let missing = command
                        .assignments()
                        .iter()
                        .find(|ea| path.value_for(ea.motor).is_none())
                        .copied();
                    match missing {
                        Some(ElementaryAction { motor, .. }) => {
                            let path = path.clone();
                            let children: Vec<usize> = (0..self.motor_ranges[motor])
                                .map(|k| {
                                    let child_path = path.with(ElementaryAction::new(motor, k));
                                    self.nodes.push(Node::Open { path: child_path });
                                    self.open += 1;
                                    self.nodes.len() - 1
                                })
                                .collect();
                            self.nodes[node] = Node::Internal { motor, children };
                            self.closed += 1;
                            // Reprocess the now-internal node; it descends
                            // into the single compatible branch.
                        }
                        None => {
                            self.to_leaf(node, entry_idx);
                            return;
                        }
                    }
                }
            }
        }
    }
}

/// Evaluates the action space by building the motor-keyed decision tree.
///
/// `entries` must be sorted in active-set order and contain a universally
/// accordant rule (an empty command) so the tree is guaranteed to close.
/// Produces exactly the same situation value, best command, and best guess
/// as [`super::evaluate_bruteforce`] under the same guesses.
pub fn evaluate_tree(entries: &[EvalEntry<'_>], motor_ranges: &[usize]) -> TreeEvaluation {
    assert!(!entries.is_empty(), "cannot evaluate with no active rules");
    let mut builder = TreeBuilder::new(entries, motor_ranges);
    let mut rules_processed = 0;
    let mut max_nodes_visited = 0;

    for entry_idx in 0..entries.len() {
        builder.visited = 0;
        builder.include(0, entry_idx);
        max_nodes_visited = max_nodes_visited.max(builder.visited);
        rules_processed += 1;
        if builder.closed == builder.open {
            break;
        }
    }
    assert_eq!(
        builder.closed, builder.open,
        "tree did not close; a universally accordant rule is required"
    );

    let best_leaf = builder.best_leaf.expect("closed tree has at least one leaf");
    let best = builder.leaves[best_leaf].cover.clone();
    let best_entry = builder.leaves[best_leaf].entry;
    TreeEvaluation {
        result: EvaluationResult {
            value: builder.value,
            best,
            best_guess: builder.best_guess,
            best_entry,
        },
        rules_processed,
        leaves: builder.leaves,
        max_nodes_visited,
        nodes_created: builder.nodes.len(),
    }
}
