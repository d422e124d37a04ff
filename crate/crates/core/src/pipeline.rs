//! Symbolic block-Markov schedule of `k`-hop coding.
//!
//! Messages `w^1..w^B` enter at the source, one per block, and traverse the
//! pipeline over `B + T - 2` blocks. In block `b` stream `U_j` carries
//! `w^{b-j+1}`, so node `t` sends `(w^{b-t+1}, w^{b-t}, ...)` on its streams
//! `U_t, U_{t+1}, ...`. Receiver `t` decodes `w^m` at the end of block
//! `m + t - 2` from the last `min(k, t-1)` blocks. Indices outside `1..=B`
//! are the dummy letter.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::scheme::valid_streams;

/// A message index slot in a block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    /// Fixed known letter sent before the first and after the last message.
    Dummy,
    Message(usize),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Dummy => write!(f, "."),
            Letter::Message(m) => write!(f, "w{m}"),
        }
    }
}

/// Where and from which blocks a node decodes one message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeEvent {
    pub node: usize,
    pub message: usize,
    /// Block at whose end decoding happens.
    pub block: usize,
    /// Blocks of received signal used, ascending.
    pub window: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleTrace {
    messages: usize,
    node_count: usize,
    hops: usize,
    /// `sends[b - 1][t - 1]`: letters node `t` sends in block `b`, on streams
    /// `U_t, U_{t+1}, ...`.
    sends: Vec<Vec<Vec<Letter>>>,
    decodes: Vec<DecodeEvent>,
}

pub fn build_schedule(node_count: usize, hops: usize, messages: usize) -> Result<ScheduleTrace> {
    if node_count < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 nodes, got {node_count}"
        )));
    }
    if hops == 0 || hops > node_count - 1 {
        return Err(Error::invalid(format!(
            "hop depth {hops} outside 1..={}",
            node_count - 1
        )));
    }
    if messages == 0 {
        return Err(Error::invalid("need at least one message"));
    }
    let blocks = messages + node_count - 2;
    let letter = |idx: isize| {
        if idx >= 1 && idx as usize <= messages {
            Letter::Message(idx as usize)
        } else {
            Letter::Dummy
        }
    };
    let sends = (1..=blocks)
        .map(|b| {
            (1..node_count)
                .map(|t| {
                    let streams = valid_streams(node_count, hops, t);
                    (0..streams)
                        .map(|m| letter(b as isize - t as isize + 1 - m as isize))
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut decodes = Vec::with_capacity((node_count - 1) * messages);
    for node in 2..=node_count {
        let width = hops.min(node - 1);
        for message in 1..=messages {
            let block = message + node - 2;
            decodes.push(DecodeEvent {
                node,
                message,
                block,
                window: (block + 1 - width..=block).collect(),
            });
        }
    }
    Ok(ScheduleTrace {
        messages,
        node_count,
        hops,
        sends,
        decodes,
    })
}

impl ScheduleTrace {
    pub fn messages(&self) -> usize {
        self.messages
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn hops(&self) -> usize {
        self.hops
    }

    pub fn block_count(&self) -> usize {
        self.sends.len()
    }

    /// Letters node `t` sends in block `b`.
    pub fn sends(&self, block: usize, node: usize) -> &[Letter] {
        &self.sends[block - 1][node - 1]
    }

    pub fn decodes(&self) -> &[DecodeEvent] {
        &self.decodes
    }

    /// Block at whose end `node` holds `message`. The source holds message
    /// `m` from the start of block `m`, i.e. the end of block `m - 1`.
    pub fn available_after(&self, node: usize, message: usize) -> Option<usize> {
        if node == 1 {
            return Some(message - 1);
        }
        self.decodes
            .iter()
            .find(|d| d.node == node && d.message == message)
            .map(|d| d.block)
    }

    /// Codebook parity of block `b`: consecutive blocks alternate between
    /// two independently generated codebooks.
    pub fn codebook(&self, block: usize) -> usize {
        (block + 1) % 2
    }

    /// Checks every structural property of the schedule.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let (n, k, big_b) = (self.node_count, self.hops, self.messages);
        if self.block_count() != big_b + n - 2 {
            return Err(format!(
                "expected {} blocks, got {}",
                big_b + n - 2,
                self.block_count()
            ));
        }
        for node in 1..n {
            let mut last_use = vec![0usize; big_b + 1];
            let mut uses = vec![0usize; big_b + 1];
            for b in 1..=self.block_count() {
                let letters = self.sends(b, node);
                if letters.len() != valid_streams(n, k, node) {
                    return Err(format!("node {node} block {b}: {} letters", letters.len()));
                }
                for (m, letter) in letters.iter().enumerate() {
                    let expect = b as isize - node as isize + 1 - m as isize;
                    let ok = match letter {
                        Letter::Message(x) => *x as isize == expect,
                        Letter::Dummy => expect < 1 || expect > big_b as isize,
                    };
                    if !ok {
                        return Err(format!("node {node} block {b} slot {m}: sent {letter}"));
                    }
                    if let Letter::Message(x) = *letter {
                        let have = self
                            .available_after(node, x)
                            .ok_or_else(|| format!("node {node} never obtains w{x}"))?;
                        if have >= b {
                            return Err(format!(
                                "causality: node {node} sends w{x} in block {b} but holds it only after block {have}"
                            ));
                        }
                        last_use[x] = last_use[x].max(b);
                        uses[x] += 1;
                    }
                }
            }
            for x in 1..=big_b {
                let have = self.available_after(node, x).unwrap();
                if last_use[x] - have > k {
                    return Err(format!(
                        "storage: node {node} holds w{x} for {} blocks",
                        last_use[x] - have
                    ));
                }
                if uses[x] != valid_streams(n, k, node) {
                    return Err(format!("node {node} sends w{x} in {} blocks", uses[x]));
                }
            }
        }
        for node in 2..=n {
            for x in 1..=big_b {
                let events: Vec<&DecodeEvent> = self
                    .decodes
                    .iter()
                    .filter(|d| d.node == node && d.message == x)
                    .collect();
                if events.len() != 1 {
                    return Err(format!("node {node} decodes w{x} {} times", events.len()));
                }
                let d = events[0];
                if d.window.len() != k.min(node - 1) {
                    return Err(format!("node {node} w{x}: window {:?}", d.window));
                }
                // every block in the window carries w^x on a decoded stream
                for &b in &d.window {
                    let stream = b as isize - x as isize + 1;
                    if stream < (node as isize - k as isize).max(1) || stream >= node as isize {
                        return Err(format!(
                            "node {node} w{x}: block {b} carries it on U{stream}, outside the decoded streams"
                        ));
                    }
                }
            }
        }
        if self.available_after(n, big_b) != Some(self.block_count()) {
            return Err("destination does not finish with the last block".into());
        }
        Ok(())
    }
}

impl fmt::Display for ScheduleTrace {
    /// One line per block: the letters each transmitter sends, then the
    /// decodes completed at the end of the block.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in 1..=self.block_count() {
            write!(f, "block {b} codebook {}:", self.codebook(b))?;
            for node in 1..self.node_count {
                let letters: Vec<String> =
                    self.sends(b, node).iter().map(|l| l.to_string()).collect();
                write!(f, " x{node}({})", letters.join(","))?;
            }
            let done: Vec<String> = self
                .decodes
                .iter()
                .filter(|d| d.block == b)
                .map(|d| {
                    let first = d.window[0];
                    format!("n{}<-w{}[{}..{}]", d.node, d.message, first, d.block)
                })
                .collect();
            if !done.is_empty() {
                write!(f, " | {}", done.join(" "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Exact `B / (B + T - 2)`, as (numerator, denominator).
pub fn throughput_factor(messages: u64, node_count: u64) -> Result<(u64, u64)> {
    if messages == 0 || node_count < 2 {
        return Err(Error::invalid("need B >= 1 and T >= 2"));
    }
    Ok((messages, messages + node_count - 2))
}

/// Nodes whose codebooks node `t` must know under `k`-hop coding.
pub fn view_set(t: usize, hops: usize, node_count: usize) -> Result<BTreeSet<usize>> {
    if t == 0 || t > node_count {
        return Err(Error::invalid(format!("node {t} outside 1..={node_count}")));
    }
    if hops == 0 || hops > node_count - 1 {
        return Err(Error::invalid(format!(
            "hop depth {hops} outside 1..={}",
            node_count - 1
        )));
    }
    let lo = t.saturating_sub(hops).max(1);
    let hi = (t + hops - 1).min(node_count - 1);
    let mut set: BTreeSet<usize> = (lo..=hi).collect();
    set.insert(t);
    Ok(set)
}

/// Nodes that must reconfigure when node `j` changes or fails.
pub fn impact_of_change(j: usize, hops: usize, node_count: usize) -> Result<BTreeSet<usize>> {
    if j == 0 || j > node_count {
        return Err(Error::invalid(format!("node {j} outside 1..={node_count}")));
    }
    let mut out = BTreeSet::new();
    for t in 1..=node_count {
        if view_set(t, hops, node_count)?.contains(&j) {
            out.insert(t);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn five_node_two_hop() {
        let s = build_schedule(5, 2, 3).unwrap();
        assert_eq!(s.block_count(), 6);
        assert_eq!(s.sends(1, 1), &[Letter::Message(1), Letter::Dummy]);
        assert_eq!(s.sends(2, 2), &[Letter::Message(1), Letter::Dummy]);
        assert_eq!(s.sends(3, 2), &[Letter::Message(2), Letter::Message(1)]);
        assert_eq!(s.sends(4, 4), &[Letter::Message(1)]);
        // node 4 decodes w^{b-2} at the end of block b over {b-1, b}
        for b in 3..=5 {
            let d = s
                .decodes()
                .iter()
                .find(|d| d.node == 4 && d.block == b)
                .unwrap();
            assert_eq!(d.message, b - 2);
            assert_eq!(d.window, vec![b - 1, b]);
        }
        s.check_invariants().unwrap();
    }

    #[test]
    fn node_two_uses_one_block() {
        let s = build_schedule(5, 2, 4).unwrap();
        for d in s.decodes().iter().filter(|d| d.node == 2) {
            assert_eq!(d.window, vec![d.message]);
        }
    }

    #[test]
    fn point_to_point_pipeline() {
        for k in [1] {
            let s = build_schedule(2, k, 5).unwrap();
            assert_eq!(s.block_count(), 5);
            for d in s.decodes() {
                assert_eq!(d.block, d.message);
            }
            s.check_invariants().unwrap();
        }
    }

    #[test]
    fn single_message_flushes_in_t_minus_one_blocks() {
        for n in 2..8 {
            let s = build_schedule(n, 1, 1).unwrap();
            assert_eq!(s.block_count(), n - 1);
            assert_eq!(s.available_after(n, 1), Some(n - 1));
        }
    }

    #[test]
    fn codebooks_alternate() {
        let s = build_schedule(4, 2, 3).unwrap();
        assert_ne!(s.codebook(1), s.codebook(2));
        assert_eq!(s.codebook(1), s.codebook(3));
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(build_schedule(1, 1, 1).is_err());
        assert!(build_schedule(4, 4, 1).is_err());
        assert!(build_schedule(4, 0, 1).is_err());
        assert!(build_schedule(4, 2, 0).is_err());
    }

    #[test]
    fn throughput() {
        assert_eq!(throughput_factor(1, 2).unwrap(), (1, 1));
        assert_eq!(throughput_factor(3, 5).unwrap(), (3, 6));
        let (num, den) = throughput_factor(1_000_000, 5).unwrap();
        assert!(num as f64 / den as f64 >= 0.999996);
        assert!(throughput_factor(0, 5).is_err());
    }

    #[test]
    fn view_sets() {
        assert_eq!(view_set(1, 2, 5).unwrap(), BTreeSet::from([1, 2]));
        assert_eq!(view_set(4, 2, 5).unwrap(), BTreeSet::from([2, 3, 4]));
        assert_eq!(view_set(5, 2, 5).unwrap(), BTreeSet::from([3, 4, 5]));
        // omniscient: every transmitter, plus the node itself
        assert_eq!(view_set(3, 4, 5).unwrap(), BTreeSet::from([1, 2, 3, 4]));
        assert_eq!(view_set(5, 4, 5).unwrap(), (1..=5).collect());
    }

    #[test]
    fn failure_locality() {
        let hit = impact_of_change(4, 2, 5).unwrap();
        assert!(!hit.contains(&1));
        assert_eq!(hit, BTreeSet::from([3, 4, 5]));
        assert_eq!(impact_of_change(1, 1, 5).unwrap(), BTreeSet::from([1, 2]));
        for j in 1..6 {
            assert_eq!(impact_of_change(j, 5, 6).unwrap(), (1..=6).collect());
        }
        // the destination carries no stream, so only its own decoder changes
        assert_eq!(impact_of_change(6, 5, 6).unwrap(), BTreeSet::from([6]));
    }

    proptest! {
        #[test]
        fn schedules_satisfy_invariants(n in 2usize..9, k in 1usize..5, b in 1usize..7) {
            prop_assume!(k < n);
            let s = build_schedule(n, k, b).unwrap();
            prop_assert_eq!(s.check_invariants(), Ok(()));
        }

        #[test]
        fn impact_is_local(n in 8usize..40, k in 1usize..4, offset in 0usize..100) {
            let j = k + 1 + offset % (n - 2 * k - 1);
            prop_assume!(j > k && j + k < n);
            prop_assert!(impact_of_change(j, k, n).unwrap().len() <= 2 * k);
        }
    }
}
