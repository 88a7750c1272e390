/// A 2-SAT instance over variables `0..n`. Literal `2x` is `x`, `2x + 1`
/// is its negation.
#[derive(Clone, Debug)]
pub struct TwoSat {
    n: usize,
    implications: Vec<Vec<usize>>,
}

pub fn lit(var: usize, value: bool) -> usize {
    2 * var + usize::from(!value)
}

impl TwoSat {
    pub fn new(n: usize) -> Self {
        TwoSat { n, implications: vec![Vec::new(); 2 * n] }
    }

    /// Adds the clause `a or b`.
    pub fn either(&mut self, a: usize, b: usize) {
        self.implications[a ^ 1].push(b);
        self.implications[b ^ 1].push(a);
    }

    pub fn equal(&mut self, x: usize, y: usize) {
        self.either(lit(x, false), lit(y, true));
        self.either(lit(x, true), lit(y, false));
    }

    pub fn differ(&mut self, x: usize, y: usize) {
        self.either(lit(x, true), lit(y, true));
        self.either(lit(x, false), lit(y, false));
    }

    /// A satisfying assignment, or a variable forced both ways.
    pub fn solve(&self) -> Result<Vec<bool>, usize> {
        let comp = self.components();
        let mut out = Vec::with_capacity(self.n);
        for x in 0..self.n {
            let (t, f) = (comp[2 * x], comp[2 * x + 1]);
            if t == f {
                return Err(x);
            }
            // Tarjan numbers components in reverse topological order.
            out.push(t < f);
        }
        Ok(out)
    }

    /// Strongly connected components by Tarjan's algorithm, iterative.
    fn components(&self) -> Vec<usize> {
        let m = 2 * self.n;
        let mut index = vec![usize::MAX; m];
        let mut low = vec![0; m];
        let mut on_stack = vec![false; m];
        let mut comp = vec![usize::MAX; m];
        let mut stack = Vec::new();
        let (mut counter, mut ncomp) = (0, 0);
        for root in 0..m {
            if index[root] != usize::MAX {
                continue;
            }
            let mut work = vec![(root, 0usize)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (u, ref mut next)) = work.last_mut() {
                if let Some(&w) = self.implications[u].get(*next) {
                    *next += 1;
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        work.push((w, 0));
                    } else if on_stack[w] {
                        low[u] = low[u].min(index[w]);
                    }
                } else {
                    work.pop();
                    if let Some(&(parent, _)) = work.last() {
                        low[parent] = low[parent].min(low[u]);
                    }
                    if low[u] == index[u] {
                        loop {
                            let w = stack.pop().expect("component members are stacked");
                            on_stack[w] = false;
                            comp[w] = ncomp;
                            if w == u {
                                break;
                            }
                        }
                        ncomp += 1;
                    }
                }
            }
        }
        comp
    }
}
