//! Dancing-links exact cover over primary items `0..items`.

use crate::budget::{Meter, Search, SearchBudget};

pub(crate) struct ExactCover {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    /// Item header of each node.
    col: Vec<usize>,
    row: Vec<usize>,
    len: Vec<usize>,
}

impl ExactCover {
    /// Node 0 is the root, nodes `1..=items` are item headers.
    pub fn new(items: usize, options: &[Vec<usize>]) -> Self {
        let header = items + 1;
        let total = header + options.iter().map(Vec::len).sum::<usize>();
        let mut dl = ExactCover {
            left: Vec::with_capacity(total),
            right: Vec::with_capacity(total),
            up: Vec::with_capacity(total),
            down: Vec::with_capacity(total),
            col: Vec::with_capacity(total),
            row: Vec::with_capacity(total),
            len: vec![0; header],
        };
        for i in 0..header {
            dl.left.push(if i == 0 { items } else { i - 1 });
            dl.right.push(if i == items { 0 } else { i + 1 });
            dl.up.push(i);
            dl.down.push(i);
            dl.col.push(i);
            dl.row.push(usize::MAX);
        }
        for (r, opt) in options.iter().enumerate() {
            let first = dl.col.len();
            for (j, &item) in opt.iter().enumerate() {
                assert!(item < items, "item {item} out of range");
                let c = item + 1;
                let node = dl.col.len();
                dl.col.push(c);
                dl.row.push(r);
                dl.up.push(dl.up[c]);
                dl.down.push(c);
                let above = dl.up[c];
                dl.down[above] = node;
                dl.up[c] = node;
                dl.len[c] += 1;
                dl.left.push(if j == 0 { node } else { node - 1 });
                dl.right.push(first);
                if j > 0 {
                    dl.right[node - 1] = node;
                    dl.left[first] = node;
                }
            }
        }
        dl
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.len[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                self.len[self.col[j]] += 1;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    /// Selects option `r` up front; false if it clashes with earlier picks.
    pub fn force(&mut self, options: &[Vec<usize>], r: usize) -> bool {
        let live = |dl: &Self, item: usize| {
            let c = item + 1;
            let mut h = dl.right[0];
            while h != 0 {
                if h == c {
                    return true;
                }
                h = dl.right[h];
            }
            false
        };
        if !options[r].iter().all(|&i| live(self, i)) {
            return false;
        }
        for &i in &options[r] {
            self.cover(i + 1);
        }
        true
    }

    /// First solution as option indices, smallest-branching item first.
    pub fn solve(&mut self, budget: &SearchBudget) -> Search<Vec<usize>> {
        let mut meter = budget.meter();
        let mut picked = Vec::new();
        let found = self.search(&mut picked, &mut meter);
        meter.finish(found.then_some(picked))
    }

    fn search(&mut self, picked: &mut Vec<usize>, meter: &mut Meter) -> bool {
        if !meter.tick() {
            return false;
        }
        if self.right[0] == 0 {
            return true;
        }
        let mut best = self.right[0];
        let mut c = self.right[best];
        while c != 0 && self.len[best] > 0 {
            if self.len[c] < self.len[best] {
                best = c;
            }
            c = self.right[c];
        }
        if self.len[best] == 0 {
            return false;
        }
        self.cover(best);
        let mut r = self.down[best];
        while r != best {
            picked.push(self.row[r]);
            let mut j = self.right[r];
            while j != r {
                self.cover(self.col[j]);
                j = self.right[j];
            }
            if self.search(picked, meter) {
                return true;
            }
            let mut j = self.left[r];
            while j != r {
                self.uncover(self.col[j]);
                j = self.left[j];
            }
            picked.pop();
            if meter.exhausted() {
                break;
            }
            r = self.down[r];
        }
        self.uncover(best);
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Outcome;

    #[test]
    fn knuth_example() {
        // Items a..g = 0..7; the unique cover is options {0, 3, 4}.
        let options = vec![
            vec![2, 4],
            vec![0, 3, 6],
            vec![1, 2, 5],
            vec![0, 3, 5],
            vec![1, 6],
            vec![3, 4, 6],
        ];
        let mut dl = ExactCover::new(7, &options);
        let mut sol = dl.solve(&SearchBudget::default()).found().unwrap();
        sol.sort();
        assert_eq!(sol, vec![0, 3, 4]);
    }

    #[test]
    fn detects_absence_and_forcing() {
        let options = vec![vec![0, 1], vec![1, 2]];
        let mut dl = ExactCover::new(3, &options);
        assert_eq!(dl.solve(&SearchBudget::default()).outcome, Outcome::Nonexistent);

        let options = vec![vec![0, 1], vec![1, 2], vec![2], vec![0]];
        let mut dl = ExactCover::new(3, &options);
        assert!(dl.force(&options, 1));
        assert!(!dl.force(&options, 0));
        let sol = dl.solve(&SearchBudget::default()).found().unwrap();
        assert_eq!(sol, vec![3]);
    }

    #[test]
    fn empty_universe_is_covered() {
        let mut dl = ExactCover::new(0, &[]);
        assert_eq!(dl.solve(&SearchBudget::default()).outcome, Outcome::Found(vec![]));
    }
}
