//! The reachable-state graph below one game state.
//!
//! Offers and transition probabilities do not depend on the utility, so
//! the graph is built once and re-evaluated for as many utilities as
//! needed. Nodes are stored level by level, so every child has a larger
//! index than its parent and a reverse sweep is a valid backward
//! induction order.

use std::collections::HashMap;

use crate::banker::{Offer, OfferRule};
use crate::error::{Error, Result};
use crate::model::{successor_states, Action, GameState, UtilitySpec};

use super::{GameSpec, SolverConfig};

#[derive(Debug, Clone)]
pub(crate) enum NodeKind {
    /// One case left.
    Terminal { prize: f64 },
    /// An offer point; children are listed in ascending bitmask order.
    Decision {
        offer: Offer,
        children: Vec<(usize, f64)>,
    },
}

#[derive(Debug, Clone)]
pub(crate) struct Node {
    pub state: GameState,
    pub kind: NodeKind,
}

impl Node {
    pub fn offer(&self) -> Offer {
        match &self.kind {
            NodeKind::Terminal { prize } => Offer {
                amount: *prize,
                rule: OfferRule::Terminal,
            },
            NodeKind::Decision { offer, .. } => *offer,
        }
    }
}

/// Q-values of one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct NodeValue {
    pub q_deal: f64,
    pub q_nodeal: f64,
}

impl NodeValue {
    pub fn action(&self) -> Action {
        if self.q_nodeal > self.q_deal {
            Action::NoDeal
        } else {
            Action::Deal
        }
    }

    pub fn value(&self) -> f64 {
        match self.action() {
            Action::Deal => self.q_deal,
            Action::NoDeal => self.q_nodeal,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Lattice {
    pub nodes: Vec<Node>,
}

/// Upper bound on transition edges below a state with `prizes` cases at `round`.
pub(crate) fn estimate_edges(spec: &GameSpec, prizes: usize, round: usize) -> f64 {
    let mut edges = 0.0;
    let mut n = prizes;
    let mut r = round;
    while n > 1 {
        let k = spec.schedule.opens_after(r, n);
        edges += binomial(prizes, n).max(1.0) * binomial(n, k);
        n -= k.min(n - 1);
        r += 1;
    }
    edges
}

/// Money unit for CRRA(γ) on prizes in `[lo, hi]`: the smallest prize
/// when γ < 1 and the largest otherwise. Every `x^(1-γ)` is then at
/// least 1, so utilities never cancel against the constant in
/// `(x^(1-γ) - 1)/(1-γ)`. CRRA choices do not depend on the unit.
pub(crate) fn crra_unit(gamma: f64, lo: f64, hi: f64) -> f64 {
    if gamma < 1.0 {
        lo
    } else {
        hi
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl Lattice {
    pub fn build(spec: &GameSpec, root: GameState, config: &SolverConfig) -> Result<Self> {
        let prizes = root.len();
        let edges = estimate_edges(spec, prizes, root.round);
        if prizes > config.max_prizes || edges > config.max_edges {
            return Err(Error::Guard {
                prizes,
                edges,
                max_prizes: config.max_prizes,
                max_edges: config.max_edges,
            });
        }

        let mut nodes: Vec<Node> = Vec::new();
        let mut level: Vec<GameState> = vec![root];
        while !level.is_empty() {
            let base = nodes.len();
            let next_base = base + level.len();
            let mut next_index: HashMap<u64, usize> = HashMap::new();
            let mut next_level: Vec<GameState> = Vec::new();
            for state in &level {
                if state.is_terminal() {
                    nodes.push(Node {
                        state: *state,
                        kind: NodeKind::Terminal {
                            prize: state.prizes(&spec.ladder)[0],
                        },
                    });
                    continue;
                }
                let offer = spec.banker.offer(state, &spec.ladder)?;
                let k = spec.schedule.opens_after(state.round, state.len());
                let children = successor_states(state, k)?
                    .into_iter()
                    .map(|(child, p)| {
                        let idx = *next_index.entry(child.remaining).or_insert_with(|| {
                            next_level.push(child);
                            next_base + next_level.len() - 1
                        });
                        (idx, p)
                    })
                    .collect();
                nodes.push(Node {
                    state: *state,
                    kind: NodeKind::Decision { offer, children },
                });
            }
            level = next_level;
        }
        Ok(Self { nodes })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Backward induction over every node. Money is divided by `scale`
    /// before entering the utility.
    pub fn evaluate(&self, utility: &UtilitySpec, scale: f64) -> Result<Vec<NodeValue>> {
        let mut values = vec![
            NodeValue {
                q_deal: 0.0,
                q_nodeal: 0.0
            };
            self.nodes.len()
        ];
        for i in (0..self.nodes.len()).rev() {
            values[i] = self.node_value(i, utility, scale, |c| values[c].value())?;
        }
        Ok(values)
    }

    fn node_value(
        &self,
        i: usize,
        utility: &UtilitySpec,
        scale: f64,
        child_value: impl Fn(usize) -> f64,
    ) -> Result<NodeValue> {
        Ok(match &self.nodes[i].kind {
            NodeKind::Terminal { prize } => {
                let v = utility.value(prize / scale)?;
                NodeValue {
                    q_deal: v,
                    q_nodeal: v,
                }
            }
            NodeKind::Decision { offer, children } => {
                let q_deal = utility.value(offer.amount / scale)?;
                let mut q_nodeal = 0.0;
                for (c, p) in children {
                    q_nodeal += p * child_value(*c);
                }
                NodeValue { q_deal, q_nodeal }
            }
        })
    }

    /// Nodes reachable from `root` (itself included), in descending index order.
    pub fn reachable_from(&self, root: usize) -> Vec<usize> {
        let mut seen = vec![false; self.nodes.len()];
        seen[root] = true;
        let mut out = Vec::new();
        for i in root..self.nodes.len() {
            if !seen[i] {
                continue;
            }
            out.push(i);
            if let NodeKind::Decision { children, .. } = &self.nodes[i].kind {
                for (c, _) in children {
                    seen[*c] = true;
                }
            }
        }
        out.reverse();
        out
    }

    /// Evaluates only `order` (from [`Self::reachable_from`]) and returns the
    /// root's Q-values. `scratch` must hold one slot per node.
    ///
    /// With `frozen` set, every node other than the root keeps the action
    /// recorded there instead of re-optimizing.
    pub fn evaluate_subtree(
        &self,
        order: &[usize],
        utility: &UtilitySpec,
        scale: f64,
        scratch: &mut [f64],
        frozen: Option<&[Action]>,
    ) -> Result<NodeValue> {
        let root = *order.last().expect("subtree contains its root");
        for &i in order {
            let v = self.node_value(i, utility, scale, |c| scratch[c])?;
            if i == root {
                return Ok(v);
            }
            scratch[i] = match frozen.map(|a| a[i]) {
                Some(Action::Deal) => v.q_deal,
                Some(Action::NoDeal) => v.q_nodeal,
                None => v.value(),
            };
        }
        unreachable!("root is the last node of its subtree order")
    }
}
