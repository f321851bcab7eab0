//! Random instances for property tests and the acceptance corpus.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bits::Bits;
use crate::models::{Cts, Edge};
use crate::order::Poset;

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_states: usize,
    pub max_conditions: usize,
    pub max_actions: usize,
    /// Probability that a given `(x, a, y)` carries a non-empty label.
    pub density: f64,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_states: 5,
            max_conditions: 3,
            max_actions: 2,
            density: 0.35,
        }
    }
}

/// A poset on `c0 .. c{k-1}` built from a random acyclic relation under a
/// random labelling.
pub fn random_poset<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Poset {
    let names: Vec<String> = (0..k).map(|i| format!("c{i}")).collect();
    let mut perm: Vec<usize> = (0..k).collect();
    perm.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if rng.gen_bool(0.4) {
                pairs.push((names[perm[i]].clone(), names[perm[j]].clone()));
            }
        }
    }
    Poset::new(&names, pairs).expect("edges follow a linear order")
}

/// A random non-empty downset.
pub fn random_downset<R: Rng + ?Sized>(rng: &mut R, p: &Poset) -> Bits {
    loop {
        let set = Bits::from_indices(p.len(), (0..p.len()).filter(|_| rng.gen_bool(0.5)));
        if !set.is_empty() {
            return p.close_down(&set);
        }
    }
}

pub fn random_cts<R: Rng + ?Sized>(rng: &mut R, shape: Shape) -> Cts {
    let nx = rng.gen_range(1..=shape.max_states);
    let np = rng.gen_range(1..=shape.max_conditions);
    let na = rng.gen_range(1..=shape.max_actions);
    let conditions = random_poset(rng, np);
    let states: Vec<String> = (0..nx).map(|i| format!("s{i}")).collect();
    let actions: Vec<String> = (0..na).map(|i| format!("a{i}")).collect();
    let mut edges = Vec::new();
    for x in &states {
        for a in &actions {
            for y in &states {
                if rng.gen_bool(shape.density) {
                    let label = random_downset(rng, &conditions);
                    let names: Vec<&str> = conditions.names_of(&label).collect();
                    edges.push(Edge::new(x, a, y, &names));
                }
            }
        }
    }
    Cts::from_edges(&states, &actions, conditions, edges, false).expect("labels are downsets")
}
