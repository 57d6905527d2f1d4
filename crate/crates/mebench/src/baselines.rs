//! Classical fast block matchers used as baselines: three-step search and
//! diamond search.
//!
//! Both walk a shrinking/stepping pattern over the SAD surface, memoize
//! every scored displacement so overlapping pattern points are never
//! counted twice, skip candidates that leave the window or the frame, and
//! break SAD ties with the shared center-preferring rule.

use crate::frame::{candidate_valid, BlockPosition, Frame, MotionVector, SearchWindow};
use crate::matching::{sad, tie_key, SadValue, SearchOutcome};
use std::collections::HashMap;

/// Which matcher to run over a sequence. `Fsa` is the exhaustive
/// reference ([`crate::matching::full_search`]), `HsBm` the harmony-search
/// estimator ([`crate::hsbm::estimate_frame`]); the dispatch lives in
/// [`crate::bench`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BaselineKind {
    Fsa,
    Tss,
    Ds,
    HsBm,
}

impl BaselineKind {
    pub fn name(self) -> &'static str {
        match self {
            BaselineKind::Fsa => "fsa",
            BaselineKind::Tss => "tss",
            BaselineKind::Ds => "ds",
            BaselineKind::HsBm => "hsbm",
        }
    }
}

impl std::fmt::Display for BaselineKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Memoizing SAD scorer for pattern searches.
struct Scorer<'a> {
    current: &'a Frame,
    previous: &'a Frame,
    block: BlockPosition,
    window: SearchWindow,
    cache: HashMap<MotionVector, SadValue>,
    evaluations: u64,
}

impl<'a> Scorer<'a> {
    fn new(
        current: &'a Frame,
        previous: &'a Frame,
        block: BlockPosition,
        window: SearchWindow,
    ) -> Self {
        assert!(
            current.same_dimensions(previous),
            "pattern search requires same-sized frames"
        );
        Self {
            current,
            previous,
            block,
            window,
            cache: HashMap::new(),
            evaluations: 0,
        }
    }

    /// SAD of `mv`, or None when it leaves the window or the frame. Each
    /// distinct valid displacement is evaluated exactly once.
    fn score(&mut self, mv: MotionVector) -> Option<SadValue> {
        let w = self.window.radius();
        if mv.u.abs() > w || mv.v.abs() > w {
            return None;
        }
        if !candidate_valid(mv, self.block, self.previous.width(), self.previous.height()) {
            return None;
        }
        if let Some(&cached) = self.cache.get(&mv) {
            return Some(cached);
        }
        let value = sad(self.current, self.previous, self.block, mv)
            .expect("validity checked before scoring");
        self.cache.insert(mv, value);
        self.evaluations += 1;
        Some(value)
    }

    /// Best of `center` and the valid subset of `center + offsets`, under
    /// the center-preferring tie-break.
    fn best_of(
        &mut self,
        center: MotionVector,
        offsets: &[(i32, i32)],
    ) -> (MotionVector, SadValue) {
        let mut best_mv = center;
        let mut best_sad = self.score(center).expect("current center is always valid");
        for &(du, dv) in offsets {
            let mv = MotionVector::new(center.u + du, center.v + dv);
            if let Some(s) = self.score(mv) {
                if tie_key(s, mv) < tie_key(best_sad, best_mv) {
                    best_mv = mv;
                    best_sad = s;
                }
            }
        }
        (best_mv, best_sad)
    }
}

/// Three-step search: score a 3x3 pattern at a power-of-two step, recenter
/// on the minimum, halve the step, repeat down to single-pel.
///
/// The initial step is the largest power of two strictly inside the
/// window (4 for radius 8, 8 for radius 16), giving the classic three or
/// four rounds.
pub fn tss_search(
    current: &Frame,
    previous: &Frame,
    block: BlockPosition,
    window: SearchWindow,
) -> SearchOutcome {
    let mut scorer = Scorer::new(current, previous, block, window);
    let mut step = initial_tss_step(window);
    let mut center = MotionVector::ZERO;
    let mut best = scorer.score(center).expect("zero displacement is valid");
    while step >= 1 {
        let offsets = ring_offsets(step);
        let (mv, s) = scorer.best_of(center, &offsets);
        center = mv;
        best = s;
        step /= 2;
    }
    SearchOutcome {
        mv: center,
        sad: best,
        evaluations: scorer.evaluations,
    }
}

fn initial_tss_step(window: SearchWindow) -> i32 {
    let w = window.0.max(1);
    // 2^(ceil(log2 w) - 1): half the window rounded up to a power of two.
    let ceil_log2 = 32 - (w - 1).leading_zeros();
    1 << ceil_log2.saturating_sub(1)
}

fn ring_offsets(step: i32) -> Vec<(i32, i32)> {
    let mut out = Vec::with_capacity(8);
    for dv in [-step, 0, step] {
        for du in [-step, 0, step] {
            if du != 0 || dv != 0 {
                out.push((du, dv));
            }
        }
    }
    out
}

/// Large diamond pattern: four axial points at distance 2 and four
/// diagonal points at distance sqrt(2).
const LDSP: [(i32, i32); 8] = [
    (0, -2),
    (-1, -1),
    (1, -1),
    (-2, 0),
    (2, 0),
    (-1, 1),
    (1, 1),
    (0, 2),
];

/// Small diamond pattern: the four axial neighbours.
const SDSP: [(i32, i32); 4] = [(0, -1), (-1, 0), (1, 0), (0, 1)];

/// Diamond search: iterate the large diamond until its minimum lands on
/// the center, then refine once with the small diamond.
///
/// Recentering requires strictly beating the center under the shared
/// tie-break key, which both terminates the loop (the key decreases every
/// move) and keeps flat surfaces at the zero displacement.
pub fn ds_search(
    current: &Frame,
    previous: &Frame,
    block: BlockPosition,
    window: SearchWindow,
) -> SearchOutcome {
    let mut scorer = Scorer::new(current, previous, block, window);
    let mut center = MotionVector::ZERO;
    loop {
        let (mv, _) = scorer.best_of(center, &LDSP);
        if mv == center {
            break;
        }
        center = mv;
    }
    let (mv, sad) = scorer.best_of(center, &SDSP);
    SearchOutcome {
        mv,
        sad,
        evaluations: scorer.evaluations,
    }
}
