//! Backtracking over colourings in index order with restricted-growth colour
//! symmetry breaking, so the first bad colouring found is the lexicographically
//! least one.
//!
//! Per fiber the engine keeps assigned/per-colour/distinct counters; per copy it
//! counts broken fibers (two colours present) and dead fibers (complete and
//! monochromatic). A copy with no broken fiber and only dead fibers is a
//! conflict. When all fibers of an unbroken copy but one are dead and the open
//! one lacks a single element, that element may not take the open fiber's colour.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use super::{Budget, ColoringProblem, SearchConfig, SearchOutcome, SearchStats, Status};

const UNSET: u32 = u32::MAX;

struct Compiled {
    n: usize,
    r: usize,
    fibers: Vec<Vec<usize>>,
    fiber_copy: Vec<usize>,
    copy_fibers: Vec<Vec<usize>>,
    var_fibers: Vec<Vec<usize>>,
    /// Some copy has no fiber that could ever carry two colours.
    hopeless: bool,
}

impl Compiled {
    fn new(p: &ColoringProblem) -> Self {
        let n = p.ground.len();
        let mut fibers = Vec::new();
        let mut fiber_copy = Vec::new();
        let mut copy_fibers = Vec::new();
        let mut hopeless = false;
        for c in &p.copies {
            let live: Vec<&[usize]> = c.fibers().into_iter().filter(|f| f.len() >= 2).collect();
            if live.is_empty() {
                hopeless = true;
            }
            let ci = copy_fibers.len();
            let mut ids = Vec::with_capacity(live.len());
            for f in live {
                ids.push(fibers.len());
                fibers.push(f.to_vec());
                fiber_copy.push(ci);
            }
            copy_fibers.push(ids);
        }
        let mut var_fibers = vec![Vec::new(); n];
        for (fi, f) in fibers.iter().enumerate() {
            for &v in f {
                var_fibers[v].push(fi);
            }
        }
        Compiled { n, r: p.r, fibers, fiber_copy, copy_fibers, var_fibers, hopeless: hopeless || p.r == 0 }
    }
}

struct Limits<'a> {
    budget: Budget,
    start: Instant,
    shared_nodes: &'a AtomicU64,
    stop: &'a AtomicBool,
}

struct Exhausted;

struct State<'a> {
    c: &'a Compiled,
    colour: Vec<u32>,
    f_assigned: Vec<u32>,
    f_count: Vec<u32>,
    f_distinct: Vec<u32>,
    cp_broken: Vec<u32>,
    cp_dead: Vec<u32>,
    cp_fired: Vec<bool>,
    forbid: Vec<u32>,
    forbid_trail: Vec<(usize, u32)>,
    fired_trail: Vec<usize>,
    marks: Vec<(usize, usize)>,
    nodes: u64,
    /// Nodes not yet flushed to the shared counter.
    pending: u64,
}

impl<'a> State<'a> {
    fn new(c: &'a Compiled) -> Self {
        let nf = c.fibers.len();
        let nc = c.copy_fibers.len();
        State {
            c,
            colour: vec![UNSET; c.n],
            f_assigned: vec![0; nf],
            f_count: vec![0; nf * c.r],
            f_distinct: vec![0; nf],
            cp_broken: vec![0; nc],
            cp_dead: vec![0; nc],
            cp_fired: vec![false; nc],
            forbid: vec![0; c.n * c.r],
            forbid_trail: Vec::new(),
            fired_trail: Vec::new(),
            marks: Vec::new(),
            nodes: 0,
            pending: 0,
        }
    }

    fn fiber_dead(&self, f: usize) -> bool {
        self.f_assigned[f] as usize == self.c.fibers[f].len() && self.f_distinct[f] == 1
    }

    /// Assigns and propagates; returns false on conflict. Always undo with [`Self::unassign`].
    fn assign(&mut self, v: usize, col: u32) -> bool {
        let r = self.c.r;
        self.marks.push((self.forbid_trail.len(), self.fired_trail.len()));
        self.colour[v] = col;
        let mut ok = true;
        for &f in &self.c.var_fibers[v] {
            let cp = self.c.fiber_copy[f];
            self.f_assigned[f] += 1;
            let slot = f * r + col as usize;
            if self.f_count[slot] == 0 {
                self.f_distinct[f] += 1;
                if self.f_distinct[f] == 2 {
                    self.cp_broken[cp] += 1;
                }
            }
            self.f_count[slot] += 1;
            if self.fiber_dead(f) {
                self.cp_dead[cp] += 1;
            }
        }
        for i in 0..self.c.var_fibers[v].len() {
            let f = self.c.var_fibers[v][i];
            let cp = self.c.fiber_copy[f];
            if self.cp_broken[cp] > 0 {
                continue;
            }
            let nfib = self.c.copy_fibers[cp].len() as u32;
            if self.cp_dead[cp] == nfib {
                ok = false;
                break;
            }
            if self.cp_dead[cp] + 1 == nfib && !self.cp_fired[cp] {
                let open = *self.c.copy_fibers[cp].iter().find(|&&g| !self.fiber_dead(g)).unwrap();
                if self.f_assigned[open] as usize + 1 == self.c.fibers[open].len() {
                    let u = *self.c.fibers[open].iter().find(|&&u| self.colour[u] == UNSET).unwrap();
                    let c = (0..r as u32).find(|&c| self.f_count[open * r + c as usize] > 0).unwrap();
                    self.forbid[u * r + c as usize] += 1;
                    self.forbid_trail.push((u, c));
                    self.cp_fired[cp] = true;
                    self.fired_trail.push(cp);
                    if (0..r).all(|c| self.forbid[u * r + c] > 0) {
                        ok = false;
                        break;
                    }
                }
            }
        }
        ok
    }

    fn unassign(&mut self, v: usize) {
        let r = self.c.r;
        let col = self.colour[v];
        for &f in &self.c.var_fibers[v] {
            let cp = self.c.fiber_copy[f];
            if self.fiber_dead(f) {
                self.cp_dead[cp] -= 1;
            }
            let slot = f * r + col as usize;
            self.f_count[slot] -= 1;
            if self.f_count[slot] == 0 {
                if self.f_distinct[f] == 2 {
                    self.cp_broken[cp] -= 1;
                }
                self.f_distinct[f] -= 1;
            }
            self.f_assigned[f] -= 1;
        }
        self.colour[v] = UNSET;
        let (fl, fd) = self.marks.pop().expect("balanced assign/unassign");
        while self.forbid_trail.len() > fl {
            let (u, c) = self.forbid_trail.pop().unwrap();
            self.forbid[u * r + c as usize] -= 1;
        }
        while self.fired_trail.len() > fd {
            let cp = self.fired_trail.pop().unwrap();
            self.cp_fired[cp] = false;
        }
    }

    fn tick(&mut self, lim: &Limits) -> Result<(), Exhausted> {
        self.nodes += 1;
        self.pending += 1;
        if self.pending >= 1024 {
            let total = lim.shared_nodes.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
            self.pending = 0;
            if total > lim.budget.max_nodes || lim.start.elapsed().as_secs_f64() > lim.budget.max_seconds {
                return Err(Exhausted);
            }
            if lim.stop.load(Ordering::Relaxed) {
                return Err(Exhausted);
            }
        } else if lim.shared_nodes.load(Ordering::Relaxed) + self.pending > lim.budget.max_nodes {
            return Err(Exhausted);
        }
        Ok(())
    }

    fn flush(&mut self, lim: &Limits) {
        lim.shared_nodes.fetch_add(self.pending, Ordering::Relaxed);
        self.pending = 0;
    }

    fn dfs(&mut self, v: usize, max_used: i64, lim: &Limits) -> Result<bool, Exhausted> {
        if v == self.c.n {
            return Ok(true);
        }
        let r = self.c.r;
        let limit = (r as i64).min(max_used + 2) as u32;
        for col in 0..limit {
            if self.forbid[v * r + col as usize] > 0 {
                continue;
            }
            self.tick(lim)?;
            let ok = self.assign(v, col);
            if ok && self.dfs(v + 1, max_used.max(col as i64), lim)? {
                return Ok(true);
            }
            self.unassign(v);
        }
        Ok(false)
    }

    /// Consistent partial colourings of the first `depth` elements, in search order.
    fn prefixes(&mut self, v: usize, depth: usize, max_used: i64, out: &mut Vec<Vec<u32>>) {
        if v == depth {
            out.push(self.colour[..depth].to_vec());
            return;
        }
        let r = self.c.r;
        let limit = (r as i64).min(max_used + 2) as u32;
        for col in 0..limit {
            if self.forbid[v * r + col as usize] > 0 {
                continue;
            }
            if self.assign(v, col) {
                self.prefixes(v + 1, depth, max_used.max(col as i64), out);
            }
            self.unassign(v);
        }
    }

    fn witness(&self) -> Vec<u32> {
        self.colour.clone()
    }
}

/// Decides whether a bad colouring exists, single-threaded, default budget.
pub fn exists_bad_coloring(problem: &ColoringProblem) -> SearchOutcome {
    exists_bad_coloring_with(problem, &SearchConfig::default())
}

pub fn exists_bad_coloring_with(problem: &ColoringProblem, cfg: &SearchConfig) -> SearchOutcome {
    let start = Instant::now();
    let compiled = Compiled::new(problem);
    let done = |status, witness, nodes| SearchOutcome {
        status,
        witness,
        stats: SearchStats { nodes, seconds: start.elapsed().as_secs_f64() },
    };
    if compiled.hopeless {
        return done(Status::NoBadColoring, None, 0);
    }
    let shared = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let lim = Limits { budget: cfg.budget, start, shared_nodes: &shared, stop: &stop };

    let jobs = cfg.jobs.max(1);
    let depth = split_depth(compiled.n, compiled.r, jobs);
    if jobs == 1 || depth == 0 {
        let mut st = State::new(&compiled);
        let res = st.dfs(0, -1, &lim);
        st.flush(&lim);
        let nodes = shared.load(Ordering::Relaxed);
        return match res {
            Ok(true) => done(Status::BadColoringFound, Some(st.witness()), nodes),
            Ok(false) => done(Status::NoBadColoring, None, nodes),
            Err(Exhausted) => done(Status::BudgetExhausted, None, nodes),
        };
    }

    let mut prefixes = Vec::new();
    State::new(&compiled).prefixes(0, depth, -1, &mut prefixes);
    let results: Vec<Mutex<Option<Result<Option<Vec<u32>>, ()>>>> = prefixes.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let best = AtomicUsize::new(usize::MAX);
    std::thread::scope(|s| {
        for _ in 0..jobs.min(prefixes.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= prefixes.len() || i > best.load(Ordering::SeqCst) {
                    break;
                }
                let mut st = State::new(&compiled);
                let mut max_used = -1i64;
                for (v, &c) in prefixes[i].iter().enumerate() {
                    let ok = st.assign(v, c);
                    debug_assert!(ok);
                    max_used = max_used.max(c as i64);
                }
                let res = st.dfs(prefixes[i].len(), max_used, &lim);
                st.flush(&lim);
                let entry = match res {
                    Ok(true) => {
                        best.fetch_min(i, Ordering::SeqCst);
                        Ok(Some(st.witness()))
                    }
                    Ok(false) => Ok(None),
                    Err(Exhausted) => {
                        stop.store(true, Ordering::Relaxed);
                        Err(())
                    }
                };
                *results[i].lock().unwrap() = Some(entry);
            });
        }
    });
    let nodes = shared.load(Ordering::Relaxed);
    for slot in &results {
        match slot.lock().unwrap().take() {
            Some(Ok(Some(w))) => return done(Status::BadColoringFound, Some(w), nodes),
            Some(Ok(None)) => continue,
            // exhausted, or skipped after a later witness while an earlier prefix was cut short
            Some(Err(())) | None => return done(Status::BudgetExhausted, None, nodes),
        }
    }
    done(Status::NoBadColoring, None, nodes)
}

/// Enough leading elements to give every worker several subtrees.
fn split_depth(n: usize, r: usize, jobs: usize) -> usize {
    if jobs <= 1 || r <= 1 {
        return 0;
    }
    let mut d = 0;
    let mut count = 1usize;
    while d + 1 < n && count < 8 * jobs {
        d += 1;
        count = count.saturating_mul(r);
    }
    d
}

/// Independent check that `coloring` defeats every copy.
pub fn verify_witness(problem: &ColoringProblem, coloring: &[u32]) -> bool {
    if coloring.len() != problem.ground.len() || coloring.iter().any(|&c| c as usize >= problem.r) {
        return false;
    }
    problem.copies.iter().all(|copy| {
        copy.fibers().iter().any(|f| f.iter().any(|&e| coloring[e] != coloring[f[0]]))
    })
}
