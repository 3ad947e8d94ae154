//! Radix-2² single-path delay-feedback schedule, generic over the arithmetic.
//!
//! Stage `i` (0-based) owns a feedback FIFO of depth `d = N >> (i + 1)`.
//! Even stages are BF2I, odd stages are BF2II. A single modulo-`N` counter
//! `c` drives everything:
//!
//! * butterfly phase of stage `i`: bit `log2(d)` of `c` (0 = fill, 1 = combine);
//! * `-j` rotation at the input of a BF2II of depth `d`: `(c + 2d) mod 4d >= 3d`;
//! * twiddle ROM address after a BF2II of depth `d`: `(c + d) mod 4d`.
//!
//! With no extra pipeline registers the first output of a frame appears on
//! the clock that consumes input `N - 1`, i.e. the latency is `N - 1`.

use std::collections::VecDeque;

pub trait SdfArith {
    type Value: Copy;

    fn zero(&self) -> Self::Value;
    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn sub(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    /// Multiply by `-j`.
    fn rotate_neg_j(&self, a: Self::Value) -> Self::Value;
    fn scale(&self, a: Self::Value, shift: u32) -> Self::Value;
    /// Multiply by the twiddle at ROM address `index` of stage pair `pair`.
    fn twiddle(&self, pair: usize, index: usize, a: Self::Value) -> Self::Value;
}

#[derive(Debug, Clone)]
pub struct SdfEngine<A: SdfArith> {
    n_points: usize,
    arith: A,
    fifos: Vec<VecDeque<A::Value>>,
    shifts: Vec<u32>,
    counter: usize,
}

impl<A: SdfArith> SdfEngine<A> {
    /// `n_points` must be a power of four; `shifts` has one entry per stage.
    pub fn new(n_points: usize, arith: A, shifts: Vec<u32>) -> Self {
        let stages = n_points.trailing_zeros() as usize;
        debug_assert_eq!(shifts.len(), stages);
        let fifos = (0..stages).map(|i| VecDeque::from(vec![arith.zero(); n_points >> (i + 1)])).collect();
        Self { n_points, arith, fifos, shifts, counter: 0 }
    }

    pub fn arith(&self) -> &A {
        &self.arith
    }

    pub fn counter(&self) -> usize {
        self.counter
    }

    pub fn fifo_depths(&self) -> Vec<usize> {
        self.fifos.iter().map(VecDeque::len).collect()
    }

    pub fn reset(&mut self) {
        let zero = self.arith.zero();
        for f in &mut self.fifos {
            f.iter_mut().for_each(|v| *v = zero);
        }
        self.counter = 0;
    }

    /// One clock: consume `x`, return the value leaving the last stage.
    pub fn clock(&mut self, x: A::Value) -> A::Value {
        let c = self.counter;
        let stages = self.fifos.len();
        let last_pair = stages / 2 - 1;
        let mut v = x;
        for (i, fifo) in self.fifos.iter_mut().enumerate() {
            let d = self.n_points >> (i + 1);
            let second = i % 2 == 1;
            if second && (c + 2 * d) % (4 * d) >= 3 * d {
                v = self.arith.rotate_neg_j(v);
            }
            let head = fifo.pop_front().expect("fifo depth is constant");
            let out = if c & d != 0 {
                fifo.push_back(self.arith.sub(head, v));
                self.arith.add(head, v)
            } else {
                fifo.push_back(v);
                head
            };
            v = self.arith.scale(out, self.shifts[i]);
            let pair = i / 2;
            if second && pair < last_pair {
                v = self.arith.twiddle(pair, (c + d) % (4 * d), v);
            }
        }
        self.counter = (c + 1) % self.n_points;
        v
    }
}
