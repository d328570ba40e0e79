//! Branching outcome trees. Surprise accrues along every resolution step:
//! each transition is gauged against the expected value held just before it.

use crate::error::Error;
use crate::lottery::{check_probability, check_probability_sum, Lottery};
use crate::num::Real;
use crate::surprise::SurpriseSpec;

/// A finite tree of chance nodes. Leaves carry terminal outcomes; branch
/// children carry transition probabilities that sum to 1 within 1e-9.
/// Zero-probability children are dropped at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree<S> {
    node: Node<S>,
}

#[derive(Debug, Clone, PartialEq)]
enum Node<S> {
    Leaf(S),
    Branch(Vec<(S, DecisionTree<S>)>),
}

impl<S: Real> DecisionTree<S> {
    pub fn leaf(outcome: S) -> Self {
        Self { node: Node::Leaf(outcome) }
    }

    /// Builds a chance node from (probability, subtree) pairs.
    pub fn branch(children: Vec<(S, Self)>) -> Result<Self, Error> {
        if children.is_empty() {
            return Err(Error::EmptyBranch);
        }
        let mut sum = S::zero();
        for &(p, _) in &children {
            check_probability(p)?;
            sum = sum + p;
        }
        check_probability_sum(sum)?;
        let kept: Vec<(S, Self)> = children.into_iter().filter(|&(p, _)| p > S::zero()).collect();
        Ok(Self { node: Node::Branch(kept) })
    }

    /// Depth-1 tree resolving the lottery in a single step.
    pub fn from_lottery(lottery: &Lottery<S>) -> Self {
        let children = lottery
            .entries()
            .iter()
            .filter(|&&(_, p)| p > S::zero())
            .map(|&(x, p)| (p, Self::leaf(x)))
            .collect();
        Self { node: Node::Branch(children) }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.node, Node::Leaf(_))
    }

    /// Terminal outcome, for leaves.
    pub fn outcome(&self) -> Option<S> {
        match self.node {
            Node::Leaf(x) => Some(x),
            Node::Branch(_) => None,
        }
    }

    /// Children as (probability, subtree) pairs; empty for leaves.
    pub fn children(&self) -> &[(S, Self)] {
        match &self.node {
            Node::Leaf(_) => &[],
            Node::Branch(children) => children,
        }
    }

    /// Number of resolution steps on the longest root-to-leaf path. A bare
    /// leaf counts as one step (the certain outcome still gets revealed).
    pub fn depth(&self) -> usize {
        fn edges<S>(node: &Node<S>) -> usize {
            match node {
                Node::Leaf(_) => 0,
                Node::Branch(children) => {
                    1 + children.iter().map(|(_, c)| edges(&c.node)).max().unwrap_or(0)
                }
            }
        }
        edges(&self.node).max(1)
    }

    /// Same tree with every terminal outcome passed through `f`.
    pub fn map_outcomes(&self, f: impl Fn(S) -> S + Copy) -> Self {
        match &self.node {
            Node::Leaf(x) => Self { node: Node::Leaf(f(*x)) },
            Node::Branch(children) => Self {
                node: Node::Branch(children.iter().map(|(p, c)| (*p, c.map_outcomes(f))).collect()),
            },
        }
    }
}

/// A tree with the expected value at every node (bottom-up) and the
/// probability of reaching it from the root (top-down).
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedTree<S> {
    root: AnnotatedNode<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedNode<S> {
    /// Expected value of the subtree; for a leaf, exactly its outcome.
    pub expected: S,
    /// Probability of reaching this node from the root.
    pub path_probability: S,
    /// Terminal outcome, for leaves.
    pub outcome: Option<S>,
    pub children: Vec<(S, AnnotatedNode<S>)>,
}

impl<S: Real> AnnotatedTree<S> {
    pub fn root(&self) -> &AnnotatedNode<S> {
        &self.root
    }

    pub fn expected_value(&self) -> S {
        self.root.expected
    }
}

fn annotate_node<S: Real>(tree: &DecisionTree<S>, path_probability: S) -> AnnotatedNode<S> {
    match &tree.node {
        Node::Leaf(x) => AnnotatedNode {
            expected: *x,
            path_probability,
            outcome: Some(*x),
            children: Vec::new(),
        },
        Node::Branch(children) => {
            let kids: Vec<(S, AnnotatedNode<S>)> = children
                .iter()
                .map(|&(p, ref c)| (p, annotate_node(c, path_probability * p)))
                .collect();
            let expected = kids.iter().fold(S::zero(), |acc, &(p, ref k)| acc + p * k.expected);
            AnnotatedNode { expected, path_probability, outcome: None, children: kids }
        }
    }
}

/// Computes per-node expected values and path probabilities.
pub fn annotate<S: Real>(tree: &DecisionTree<S>) -> AnnotatedTree<S> {
    AnnotatedTree { root: annotate_node(tree, S::one()) }
}

/// Anticipated surprise of a tree: every parent-to-child transition contributes
/// the surprise of the expectation revision, weighted by the probability of
/// reaching the child. Each distinct edge counts exactly once.
pub fn surprise_tree<S: Real>(tree: &DecisionTree<S>, spec: &SurpriseSpec<S>) -> S {
    fn edge_sum<S: Real>(node: &AnnotatedNode<S>, spec: &SurpriseSpec<S>) -> S {
        node.children.iter().fold(S::zero(), |acc, (_, child)| {
            acc + child.path_probability * spec.delta(child.expected - node.expected)
                + edge_sum(child, spec)
        })
    }
    edge_sum(annotate(tree).root(), spec)
}

/// Tree surprise plus the initial revision from an external reference point
/// to the tree's own expected value.
pub fn with_status_quo<S: Real>(
    tree: &DecisionTree<S>,
    spec: &SurpriseSpec<S>,
    status_quo: S,
) -> S {
    let annotated = annotate(tree);
    spec.delta(annotated.expected_value() - status_quo) + surprise_tree(tree, spec)
}

/// One root-to-leaf resolution path.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S> {
    /// Reference point held at each node along the path; the first entry is
    /// the root's expected value, the last is the terminal outcome.
    pub states: Vec<S>,
    /// Transition probability taken at each step.
    pub step_probabilities: Vec<S>,
    /// Product of the step probabilities.
    pub probability: S,
    pub outcome: S,
}

/// All root-to-leaf trajectories, depth-first in construction order.
pub fn enumerate_trajectories<S: Real>(tree: &DecisionTree<S>) -> Vec<Trajectory<S>> {
    fn walk<S: Real>(
        node: &AnnotatedNode<S>,
        states: &mut Vec<S>,
        steps: &mut Vec<S>,
        out: &mut Vec<Trajectory<S>>,
    ) {
        states.push(node.expected);
        if let Some(outcome) = node.outcome {
            let probability = steps.iter().fold(S::one(), |acc, &p| acc * p);
            out.push(Trajectory {
                states: states.clone(),
                step_probabilities: steps.clone(),
                probability,
                outcome,
            });
        } else {
            for &(p, ref child) in &node.children {
                steps.push(p);
                walk(child, states, steps, out);
                steps.pop();
            }
        }
        states.pop();
    }

    let annotated = annotate(tree);
    let mut out = Vec::new();
    walk(annotated.root(), &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}
