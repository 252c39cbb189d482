//! HLT coset enumeration with coincidence processing.
//!
//! Cosets are numbered from 0 (the subgroup itself). Column `2g` holds the
//! action of generator `g`, column `2g + 1` that of its inverse. Definitions
//! are made in a fixed order so runs are reproducible; once `max_cosets`
//! cosets have been defined the enumeration gives up and reports
//! [`CosetOutcome::Inconclusive`] rather than guessing.

use serde::{Deserialize, Serialize};

use super::{Letter, Presentation, Word};

const NONE: usize = usize::MAX;

/// A closed coset table: every entry defined, cosets renumbered 0..index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetTable {
    pub generators: usize,
    pub rows: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.rows.len()
    }

    /// The coset reached from `coset` by right multiplication with `letter`.
    pub fn act(&self, coset: usize, letter: Letter) -> usize {
        self.rows[coset][column(letter)]
    }

    pub fn act_word(&self, coset: usize, w: &Word) -> usize {
        w.letters().iter().fold(coset, |c, &l| self.act(c, l))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CosetOutcome {
    Index { index: usize, table: CosetTable },
    Inconclusive { cosets_defined: usize },
}

impl CosetOutcome {
    pub fn index(&self) -> Option<usize> {
        match self {
            CosetOutcome::Index { index, .. } => Some(*index),
            CosetOutcome::Inconclusive { .. } => None,
        }
    }
}

fn column(l: Letter) -> usize {
    2 * l.generator + usize::from(l.inverse)
}

fn inverse_column(c: usize) -> usize {
    c ^ 1
}

struct Capped;

struct Enumerator {
    cols: usize,
    table: Vec<usize>,
    parent: Vec<usize>,
    max_cosets: usize,
}

impl Enumerator {
    fn new(generators: usize, max_cosets: usize) -> Self {
        let cols = 2 * generators;
        Enumerator {
            cols,
            table: vec![NONE; cols],
            parent: vec![0],
            max_cosets,
        }
    }

    fn get(&self, c: usize, x: usize) -> usize {
        self.table[c * self.cols + x]
    }

    fn set(&mut self, c: usize, x: usize, v: usize) {
        self.table[c * self.cols + x] = v;
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn defined(&self) -> usize {
        self.parent.len()
    }

    fn define(&mut self, c: usize, x: usize) -> Result<usize, Capped> {
        if self.defined() >= self.max_cosets {
            return Err(Capped);
        }
        let d = self.defined();
        self.parent.push(d);
        self.table.extend(std::iter::repeat_n(NONE, self.cols));
        self.set(c, x, d);
        self.set(d, inverse_column(x), c);
        Ok(d)
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = c;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra == rb {
            return;
        }
        let (keep, kill) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[kill] = keep;
        queue.push(kill);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.get(e, x);
                if f == NONE {
                    continue;
                }
                let xi = inverse_column(x);
                self.set(f, xi, NONE);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let ex = self.get(e1, x);
                let fxi = self.get(f1, xi);
                if ex != NONE {
                    self.merge(f1, ex, &mut queue);
                } else if fxi != NONE {
                    self.merge(e1, fxi, &mut queue);
                } else {
                    self.set(e1, x, f1);
                    self.set(f1, xi, e1);
                }
            }
        }
    }

    /// Scans `w` from coset `c`, defining new cosets until the scan completes.
    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<(), Capped> {
        let mut f = c;
        let mut b = c;
        let mut i = 0;
        let mut j = w.len();
        loop {
            while i < j && self.get(f, w[i]) != NONE {
                f = self.get(f, w[i]);
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i && self.get(b, inverse_column(w[j - 1])) != NONE {
                b = self.get(b, inverse_column(w[j - 1]));
                j -= 1;
            }
            if j < i + 1 {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.set(f, w[i], b);
                self.set(b, inverse_column(w[i]), f);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    fn run(&mut self, relators: &[Vec<usize>], subgroup: &[Vec<usize>]) -> Result<(), Capped> {
        for w in subgroup {
            self.scan_and_fill(0, w)?;
        }
        let mut c = 0;
        while c < self.defined() {
            for r in relators {
                if !self.alive(c) {
                    break;
                }
                self.scan_and_fill(c, r)?;
            }
            if self.alive(c) {
                for x in 0..self.cols {
                    if self.get(c, x) == NONE {
                        self.define(c, x)?;
                    }
                }
            }
            c += 1;
        }
        Ok(())
    }

    fn compact(&self) -> CosetTable {
        let live: Vec<usize> = (0..self.defined()).filter(|&c| self.alive(c)).collect();
        let mut renumber = vec![NONE; self.defined()];
        for (new, &old) in live.iter().enumerate() {
            renumber[old] = new;
        }
        let rows = live
            .iter()
            .map(|&c| {
                (0..self.cols)
                    .map(|x| renumber[self.get(c, x)])
                    .collect()
            })
            .collect();
        CosetTable {
            generators: self.cols / 2,
            rows,
        }
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup` in the group
/// presented by `p`, defining at most `max_cosets` cosets.
pub fn coset_enumerate(p: &Presentation, subgroup: &[Word], max_cosets: usize) -> CosetOutcome {
    let max_cosets = max_cosets.max(1);
    let encode = |w: &Word| -> Vec<usize> {
        w.free_reduce().letters().iter().map(|&l| column(l)).collect()
    };
    let relators: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .map(encode)
        .filter(|r| !r.is_empty())
        .collect();
    let subgroup: Vec<Vec<usize>> = subgroup.iter().map(encode).collect();
    let mut e = Enumerator::new(p.generators().len(), max_cosets);
    match e.run(&relators, &subgroup) {
        Ok(()) => {
            let table = e.compact();
            CosetOutcome::Index {
                index: table.index(),
                table,
            }
        }
        Err(Capped) => CosetOutcome::Inconclusive {
            cosets_defined: e.defined(),
        },
    }
}
