#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use sarki_core::catalog::{FieldProfile, MinimalModel};
use sarki_core::links::{links_from, LinkDescriptor};
use sarki_core::words::{classify_letter, ClassIds, LinkLetter, QuotientElement, SarkisovWord};

/// Random walks through the link graph, with random class names for the marked letters.
pub struct WordGen {
    cache: HashMap<MinimalModel, Vec<LinkDescriptor>>,
    starts: Vec<MinimalModel>,
}

impl WordGen {
    pub fn new() -> Self {
        let starts = vec![
            MinimalModel::p2(),
            MinimalModel::hirzebruch(0),
            MinimalModel::hirzebruch(1),
            MinimalModel::conic(5),
            MinimalModel::conic(6),
            MinimalModel::quadric(),
        ];
        WordGen { cache: HashMap::new(), starts }
    }

    fn out_links(&mut self, m: &MinimalModel) -> &[LinkDescriptor] {
        self.cache
            .entry(m.clone())
            .or_insert_with(|| links_from(m, &FieldProfile::arbitrary(), 12))
    }

    pub fn word_from<R: Rng>(&mut self, rng: &mut R, start: MinimalModel, len: usize) -> SarkisovWord {
        let mut cur = start;
        let mut letters = Vec::with_capacity(len);
        for _ in 0..len {
            let options = self.out_links(&cur).to_vec();
            let Some(link) = options.choose(rng) else { break };
            let pick = |rng: &mut R| ["u", "v", "w"][rng.gen_range(0..3)].to_string();
            let ids = ClassIds { conic5: Some(pick(rng)), conic6: Some(pick(rng)), bertini: Some(pick(rng)) };
            letters.push(classify_letter(link, &ids).unwrap());
            cur = link.target.clone();
        }
        SarkisovWord::new(letters)
    }

    pub fn word<R: Rng>(&mut self, rng: &mut R, len: usize) -> SarkisovWord {
        let start = self.starts.choose(rng).unwrap().clone();
        self.word_from(rng, start, len)
    }

    /// A composable pair `(w1, w2)` with `w2` starting where `w1` ends.
    pub fn pair<R: Rng>(&mut self, rng: &mut R, l1: usize, l2: usize) -> (SarkisovWord, SarkisovWord) {
        let w1 = self.word(rng, l1);
        let end = match w1.letters.last() {
            Some(l) => l.link.target.clone(),
            None => self.starts.choose(rng).unwrap().clone(),
        };
        let w2 = self.word_from(rng, end, l2);
        (w1, w2)
    }
}

/// Reduce the letter images by merging adjacent blocks in random order.
pub fn reduce_shuffled<R: Rng>(rng: &mut R, letters: &[LinkLetter]) -> QuotientElement {
    let mut blocks: Vec<(String, BTreeSet<u64>)> =
        letters.iter().filter_map(|l| l.image()).map(|(f, g)| (f, BTreeSet::from([g]))).collect();
    loop {
        let spots: Vec<usize> = (0..blocks.len())
            .filter(|&i| blocks[i].1.is_empty() || (i + 1 < blocks.len() && blocks[i].0 == blocks[i + 1].0))
            .collect();
        let Some(&i) = spots.choose(rng) else { break };
        if blocks[i].1.is_empty() {
            blocks.remove(i);
        } else {
            let (_, next) = blocks.remove(i + 1);
            let merged: BTreeSet<u64> = blocks[i].1.symmetric_difference(&next).copied().collect();
            blocks[i].1 = merged;
        }
    }
    QuotientElement(blocks)
}
