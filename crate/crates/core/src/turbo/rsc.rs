use serde::{Deserialize, Serialize};

use crate::{Bit, Error, Result};

/// Recursive systematic convolutional constituent code.
///
/// Polynomials are bit masks with bit `i` holding the coefficient of `D^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RscSpec {
    pub feedback: u32,
    pub feedforward: u32,
    pub memory: usize,
}

/// One trellis branch: state `from` with input `input` goes to `to` emitting `parity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Branch {
    pub to: u16,
    pub parity: Bit,
}

impl RscSpec {
    /// Feedback `1 + D^3 + D^4`, feedforward `1 + D + D^3 + D^4`: 16 states.
    pub fn default_16_state() -> Self {
        RscSpec {
            feedback: 0b11001,
            feedforward: 0b11011,
            memory: 4,
        }
    }

    pub fn new(feedback: u32, feedforward: u32) -> Result<Self> {
        if feedback & 1 == 0 {
            return Err(Error::InvalidArgument(
                "feedback polynomial needs a constant term".into(),
            ));
        }
        let memory = (31 - feedback.leading_zeros()).max(31 - feedforward.max(1).leading_zeros()) as usize;
        if memory == 0 || memory > 8 {
            return Err(Error::InvalidArgument(format!("memory {memory} outside 1..=8")));
        }
        Ok(RscSpec {
            feedback,
            feedforward,
            memory,
        })
    }

    pub fn states(&self) -> usize {
        1 << self.memory
    }

    fn mask(&self) -> u32 {
        (1 << self.memory) - 1
    }

    // State bit i-1 holds a_{t-i}.
    fn feedback_bit(&self, state: u32) -> u32 {
        ((self.feedback >> 1) & state).count_ones() & 1
    }

    /// Transition from `state` on `input`.
    pub fn step(&self, state: u32, input: Bit) -> (u32, Bit) {
        let a = input as u32 ^ self.feedback_bit(state);
        let reg = (state << 1) | a;
        let parity = (self.feedforward & reg).count_ones() & 1;
        (reg & self.mask(), parity as Bit)
    }

    /// The input that feeds a zero into the register, steering towards state 0.
    pub fn tail_input(&self, state: u32) -> Bit {
        self.feedback_bit(state) as Bit
    }

    /// Branch table indexed by `[state][input]`.
    pub fn branches(&self) -> Vec<[Branch; 2]> {
        (0..self.states() as u32)
            .map(|s| {
                let mk = |u: Bit| {
                    let (to, parity) = self.step(s, u);
                    Branch { to: to as u16, parity }
                };
                [mk(0), mk(1)]
            })
            .collect()
    }

    /// Encodes `input` and terminates. Returns (parity, tail inputs, tail parities).
    pub fn encode(&self, input: &[Bit]) -> (Vec<Bit>, Vec<Bit>, Vec<Bit>) {
        let mut state = 0u32;
        let mut parity = Vec::with_capacity(input.len());
        for &u in input {
            let (s, p) = self.step(state, u);
            parity.push(p);
            state = s;
        }
        let mut tail_in = Vec::with_capacity(self.memory);
        let mut tail_par = Vec::with_capacity(self.memory);
        for _ in 0..self.memory {
            let u = self.tail_input(state);
            let (s, p) = self.step(state, u);
            tail_in.push(u);
            tail_par.push(p);
            state = s;
        }
        debug_assert_eq!(state, 0);
        (parity, tail_in, tail_par)
    }
}
