//! Dutch number words, written apart ("zeven en tachtig") or joined
//! ("zevenentachtig"), including year forms such as "achttienhonderd zeven en
//! tachtig" and ordinal days such as "een en twintigsten".

use std::collections::BTreeMap;

use super::tokens::Token;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub(crate) struct NumberGrammar {
    units: Vec<(String, u32)>,
    teens: Vec<(String, u32)>,
    tens: Vec<(String, u32)>,
    hundred: Vec<String>,
    thousand: Vec<String>,
    ordinals: Vec<(String, u32)>,
}

/// Lowercase, strip diaeresis/acute on e and drop separators so that
/// "tweeën" and "twee en" compare equal.
pub(crate) fn squash(s: &str) -> String {
    s.chars()
        .flat_map(char::to_lowercase)
        .filter(|c| !matches!(c, '-' | ' ' | '\'' | '’'))
        .map(|c| match c {
            'ë' | 'é' | 'è' => 'e',
            other => other,
        })
        .collect()
}

impl NumberGrammar {
    pub fn new(numbers: &BTreeMap<String, u32>, ordinals: &BTreeMap<String, u32>) -> Self {
        let mut g = NumberGrammar::default();
        for (word, &value) in numbers {
            let w = squash(word);
            match value {
                1..=9 => g.units.push((w, value)),
                10..=19 => g.teens.push((w, value)),
                20..=90 if value % 10 == 0 => g.tens.push((w, value)),
                100 => g.hundred.push(w),
                1000 => g.thousand.push(w),
                _ => {}
            }
        }
        g.ordinals = ordinals.iter().map(|(w, &v)| (squash(w), v)).collect();
        g
    }

    fn lookup(list: &[(String, u32)], s: &str) -> Option<u32> {
        list.iter().find(|(w, _)| w == s).map(|(_, v)| *v)
    }

    fn below_100(&self, s: &str) -> Option<u32> {
        if let Some(v) = Self::lookup(&self.units, s)
            .or_else(|| Self::lookup(&self.teens, s))
            .or_else(|| Self::lookup(&self.tens, s))
        {
            return Some(v);
        }
        self.units.iter().find_map(|(u, uv)| {
            let rest = s.strip_prefix(u.as_str())?.strip_prefix("en")?;
            Self::lookup(&self.tens, rest).map(|tv| uv + tv)
        })
    }

    // "" counts as zero; a leading "en" is tolerated ("honderd en twee").
    fn tail(&self, s: &str, below: impl Fn(&str) -> Option<u32>) -> Option<u32> {
        if s.is_empty() {
            return Some(0);
        }
        below(s).or_else(|| s.strip_prefix("en").and_then(&below))
    }

    fn below_1000(&self, s: &str) -> Option<u32> {
        if let Some(v) = self.below_100(s) {
            return Some(v);
        }
        self.hundred.iter().find_map(|h| {
            let at = s.find(h.as_str())?;
            let (pre, post) = (&s[..at], &s[at + h.len()..]);
            let multiplier = if pre.is_empty() {
                1
            } else {
                Self::lookup(&self.units, pre).or_else(|| Self::lookup(&self.teens, pre))?
            };
            Some(multiplier * 100 + self.tail(post, |r| self.below_100(r))?)
        })
    }

    /// Cardinal number below one million written as one squashed string.
    pub fn cardinal(&self, s: &str) -> Option<u32> {
        if let Some(v) = self.below_1000(s) {
            return Some(v);
        }
        self.thousand.iter().find_map(|t| {
            let at = s.find(t.as_str())?;
            let (pre, post) = (&s[..at], &s[at + t.len()..]);
            let multiplier = if pre.is_empty() { 1 } else { self.below_1000(pre)? };
            Some(multiplier * 1000 + self.tail(post, |r| self.below_1000(r))?)
        })
    }

    /// Ordinal number ("vijfden", "een en twintigsten").
    pub fn ordinal(&self, s: &str) -> Option<u32> {
        if let Some(v) = Self::lookup(&self.ordinals, s) {
            return Some(v);
        }
        self.units.iter().find_map(|(u, uv)| {
            let rest = s.strip_prefix(u.as_str())?.strip_prefix("en")?;
            let tv = Self::lookup(&self.ordinals, rest)?;
            (tv >= 20 && tv % 10 == 0).then_some(uv + tv)
        })
    }

    /// Longest run of up to `max` alphabetic tokens starting at `at` that
    /// `parse` accepts as a whole. Returns the value and the token count.
    pub fn parse_run(
        &self,
        tokens: &[Token],
        at: usize,
        max: usize,
        parse: impl Fn(&Self, &str) -> Option<u32>,
    ) -> Option<(u32, usize)> {
        let available = tokens[at.min(tokens.len())..].iter().take(max).take_while(|t| t.is_alphabetic()).count();
        (1..=available).rev().find_map(|n| {
            let joined: String = tokens[at..at + n].iter().map(|t| squash(&t.text)).collect();
            parse(self, &joined).map(|v| (v, n))
        })
    }
}
