//! The parabolic quotient `W^p` of the type `D_n` Weyl group, modelled by
//! `±`-sequences of length `n` with an even number of minuses.
//!
//! A sequence is the canonical name of a coset representative. Reduced words
//! are derived from it through the symmetric Young diagram attached to the
//! sequence and can always be replayed with [`PMSequence::apply_generator`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// A coset representative in `W^p`.
///
/// Ordering is lexicographic with `Plus < Minus`, so the identity `|++...+]`
/// is the smallest element of every rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PMSequence {
    signs: Vec<Sign>,
}

/// Index `i` of a simple reflection `s_i`, `0 <= i < n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorIndex(usize);

impl GeneratorIndex {
    pub fn new(i: usize, n: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::GeneratorOutOfRange { index: i, n });
        }
        Ok(GeneratorIndex(i))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// All generators `s_0, ..., s_{n-1}`.
    pub fn all(n: usize) -> impl Iterator<Item = GeneratorIndex> {
        (0..n).map(GeneratorIndex)
    }
}

impl fmt::Display for GeneratorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Coxeter exponent `m_ij` of the type `D_n` Dynkin diagram with the branch
/// node `2` connected to both `0` and `1`.
pub fn coxeter_m(i: usize, j: usize) -> usize {
    if i == j {
        return 1;
    }
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    let connected = match a {
        0 | 1 => b == 2,
        _ => b == a + 1,
    };
    if connected {
        3
    } else {
        2
    }
}

/// Result of multiplying a coset representative by a simple reflection on the right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    Longer(PMSequence),
    Shorter(PMSequence),
    NotInQuotient,
}

impl PMSequence {
    pub fn new(signs: Vec<Sign>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::ZeroRank);
        }
        let minuses = signs.iter().filter(|s| **s == Sign::Minus).count();
        if minuses % 2 != 0 {
            return Err(Error::OddMinusCount { minuses });
        }
        Ok(PMSequence { signs })
    }

    /// The identity coset `|++...+]`.
    pub fn identity(n: usize) -> Result<Self> {
        PMSequence::new(vec![Sign::Plus; n])
    }

    /// Parses a sign string and checks that it has rank `n`.
    pub fn parse_with_rank(s: &str, n: usize) -> Result<Self> {
        let w: PMSequence = s.parse()?;
        if w.n() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: w.n(),
            });
        }
        Ok(w)
    }

    pub fn n(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// Sign at 1-based position `p`.
    pub fn at(&self, p: usize) -> Sign {
        self.signs[p - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.signs.iter().all(|s| *s == Sign::Plus)
    }

    pub fn minus_count(&self) -> usize {
        self.signs.iter().filter(|s| **s == Sign::Minus).count()
    }

    /// Right multiplication by `s_i`.
    ///
    /// For `i >= 1` the move swaps the entries at positions `i, i+1`; for
    /// `i = 0` it flips both of the entries at positions `1, 2`. In rank one
    /// there is no second position, so `s_0` never stays in the quotient.
    pub fn apply_generator(&self, i: GeneratorIndex) -> Move {
        let i = i.get();
        let n = self.n();
        if i >= n {
            return Move::NotInQuotient;
        }
        if i == 0 {
            if n < 2 {
                return Move::NotInQuotient;
            }
            let mut next = self.signs.clone();
            return match (self.signs[0], self.signs[1]) {
                (Sign::Plus, Sign::Plus) => {
                    next[0] = Sign::Minus;
                    next[1] = Sign::Minus;
                    Move::Longer(PMSequence { signs: next })
                }
                (Sign::Minus, Sign::Minus) => {
                    next[0] = Sign::Plus;
                    next[1] = Sign::Plus;
                    Move::Shorter(PMSequence { signs: next })
                }
                _ => Move::NotInQuotient,
            };
        }
        let (a, b) = (self.signs[i - 1], self.signs[i]);
        if a == b {
            return Move::NotInQuotient;
        }
        let mut next = self.signs.clone();
        next.swap(i - 1, i);
        match a {
            Sign::Minus => Move::Longer(PMSequence { signs: next }),
            Sign::Plus => Move::Shorter(PMSequence { signs: next }),
        }
    }

    /// Coxeter length of the coset representative: every minus at 1-based
    /// position `p` contributes `p - 1`.
    pub fn length(&self) -> usize {
        self.signs
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Sign::Minus)
            .map(|(p, _)| p)
            .sum()
    }

    /// Indices `i` with `w s_i < w` in `W^p`.
    pub fn descents(&self) -> Vec<GeneratorIndex> {
        GeneratorIndex::all(self.n())
            .filter(|i| matches!(self.apply_generator(*i), Move::Shorter(_)))
            .collect()
    }

    pub fn young_diagram(&self) -> SymYoungDiagram {
        let n = self.n();
        // Walk right to left from the upper right corner: a minus closes a
        // row whose length is the current column.
        let mut rows = vec![0usize; n];
        let mut col = n;
        let mut r = 0;
        for s in self.signs.iter().rev() {
            match s {
                Sign::Plus => col -= 1,
                Sign::Minus => {
                    rows[r] = col;
                    r += 1;
                }
            }
        }
        let m = r;
        // Rows below the diagonal corner come from the transpose.
        for row in m..n {
            rows[row] = (0..m).filter(|&c| rows[c] > row).count();
        }
        SymYoungDiagram { n, rows }
    }

    /// A reduced expression read off the Young diagram row by row: the
    /// `2x2` diagonal block opening a row pair gives `0`, every other box
    /// above the diagonal gives its diagonal number.
    pub fn reduced_word(&self) -> Vec<GeneratorIndex> {
        self.young_diagram().reduced_word()
    }

    /// Replays `word` from the identity, requiring every step to be
    /// [`Move::Longer`].
    pub fn from_word(n: usize, word: &[GeneratorIndex]) -> Result<Self> {
        let mut w = PMSequence::identity(n)?;
        for (pos, &i) in word.iter().enumerate() {
            if i.get() >= n {
                return Err(Error::GeneratorOutOfRange { index: i.get(), n });
            }
            match w.apply_generator(i) {
                Move::Longer(next) => w = next,
                Move::Shorter(_) => {
                    return Err(Error::InvalidWord {
                        position: pos + 1,
                        reason: format!("s_{} shortens {}", i, w),
                    })
                }
                Move::NotInQuotient => {
                    return Err(Error::InvalidWord {
                        position: pos + 1,
                        reason: format!("{} s_{} leaves W^p", w, i),
                    })
                }
            }
        }
        Ok(w)
    }

    /// Every reduced word of `w`, found by peeling off right descents.
    /// The count grows quickly; intended for small ranks.
    pub fn all_reduced_words(&self) -> Vec<Vec<GeneratorIndex>> {
        if self.is_identity() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for i in self.descents() {
            if let Move::Shorter(prev) = self.apply_generator(i) {
                for mut word in prev.all_reduced_words() {
                    word.push(i);
                    out.push(word);
                }
            }
        }
        out
    }
}

/// All of `W^p` for rank `n`, in lexicographic order with `Plus < Minus`.
pub fn enumerate_wp(n: usize) -> Result<Vec<PMSequence>> {
    if n == 0 {
        return Err(Error::ZeroRank);
    }
    let mut out = Vec::with_capacity(1 << (n - 1));
    for bits in 0u64..(1u64 << n) {
        if bits.count_ones() % 2 != 0 {
            continue;
        }
        // Most significant bit is position 1 so that numeric order is lexicographic.
        let signs = (0..n)
            .map(|p| {
                if bits >> (n - 1 - p) & 1 == 1 {
                    Sign::Minus
                } else {
                    Sign::Plus
                }
            })
            .collect();
        out.push(PMSequence { signs });
    }
    Ok(out)
}

/// Parses a comma separated reduced word such as `"0,2,3,1"`. The empty
/// string is the empty word.
pub fn parse_word(s: &str, n: usize) -> Result<Vec<GeneratorIndex>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .enumerate()
        .map(|(pos, tok)| {
            let i: usize = tok.trim().parse().map_err(|_| Error::InvalidWord {
                position: pos + 1,
                reason: format!("{:?} is not a generator index", tok.trim()),
            })?;
            GeneratorIndex::new(i, n).map_err(|_| Error::InvalidWord {
                position: pos + 1,
                reason: format!("generator {i} out of range for n = {n}"),
            })
        })
        .collect()
}

pub fn format_word(word: &[GeneratorIndex]) -> String {
    word.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for PMSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.signs {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PMSequence {
    type Err = Error;

    /// Accepts `"-+-+"` as well as the bracketed form `"|-+-+]"`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.strip_prefix('|').unwrap_or(s);
        let body = body.strip_suffix(']').unwrap_or(body);
        let offset = if s.starts_with('|') { 1 } else { 0 };
        let signs = body
            .chars()
            .enumerate()
            .map(|(p, c)| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                other => Err(Error::InvalidSign {
                    position: p + offset + 1,
                    found: other,
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        PMSequence::new(signs)
    }
}

impl Serialize for PMSequence {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PMSequence {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A Young diagram inside the `n x n` square, symmetric under transposition,
/// with an even number of diagonal boxes. Stored as its row lengths.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymYoungDiagram {
    n: usize,
    rows: Vec<usize>,
}

impl SymYoungDiagram {
    pub fn from_rows(n: usize, mut rows: Vec<usize>) -> Result<Self> {
        if rows.len() > n {
            return Err(Error::InvalidDiagram(format!(
                "{} rows do not fit in {n}x{n}",
                rows.len()
            )));
        }
        rows.resize(n, 0);
        if rows.windows(2).any(|p| p[0] < p[1]) || rows.iter().any(|&r| r > n) {
            return Err(Error::InvalidDiagram(
                "row lengths must be non-increasing and at most n".into(),
            ));
        }
        let d = SymYoungDiagram { n, rows };
        if d.transpose() != d {
            return Err(Error::InvalidDiagram("diagram is not symmetric".into()));
        }
        if !d.diagonal_count().is_multiple_of(2) {
            return Err(Error::InvalidDiagram("odd number of diagonal boxes".into()));
        }
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        row < self.n && col < self.rows[row]
    }

    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
    }

    pub fn box_count(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn diagonal_count(&self) -> usize {
        (0..self.n).filter(|&r| self.rows[r] > r).count()
    }

    pub fn off_diagonal_count(&self) -> usize {
        self.box_count() - self.diagonal_count()
    }

    /// Number of `2x2` blocks tiling the diagonal.
    pub fn block_count(&self) -> usize {
        self.diagonal_count() / 2
    }

    fn transpose(&self) -> SymYoungDiagram {
        let rows = (0..self.n)
            .map(|c| (0..self.n).filter(|&r| self.rows[r] > c).count())
            .collect();
        SymYoungDiagram { n: self.n, rows }
    }

    /// Length of the corresponding coset representative.
    pub fn length(&self) -> usize {
        let outside_blocks = self.box_count() - 4 * self.block_count();
        outside_blocks / 2 + self.block_count()
    }

    pub fn reduced_word(&self) -> Vec<GeneratorIndex> {
        let m = self.diagonal_count();
        let mut word = Vec::with_capacity(self.length());
        for r in 0..self.n {
            let opens_block = r % 2 == 0 && r < m;
            if opens_block {
                word.push(GeneratorIndex(0));
            }
            for c in (r + 1)..self.rows[r] {
                if opens_block && c == r + 1 {
                    continue;
                }
                word.push(GeneratorIndex(c - r));
            }
        }
        word
    }

    /// Inverse of [`PMSequence::young_diagram`].
    pub fn to_sequence(&self) -> PMSequence {
        let m = self.diagonal_count();
        let mut rev = Vec::with_capacity(self.n);
        let mut col = self.n;
        for r in 0..m {
            rev.extend(std::iter::repeat_n(Sign::Plus, col - self.rows[r]));
            rev.push(Sign::Minus);
            col = self.rows[r];
        }
        rev.extend(std::iter::repeat_n(Sign::Plus, col - m));
        rev.reverse();
        PMSequence { signs: rev }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> PMSequence {
        s.parse().unwrap()
    }

    fn gen(i: usize) -> GeneratorIndex {
        GeneratorIndex(i)
    }

    #[test]
    fn enumerate_small_ranks() {
        assert_eq!(enumerate_wp(1).unwrap(), vec![seq("+")]);
        let four: Vec<String> = enumerate_wp(4).unwrap().iter().map(|w| w.to_string()).collect();
        let mut expected = vec!["++++", "--++", "-+-+", "-++-", "+--+", "+-+-", "++--", "----"];
        expected.sort_by_key(|s| s.replace('+', "0").replace('-', "1"));
        assert_eq!(four, expected);
        assert_eq!(enumerate_wp(6).unwrap().len(), 32);
        assert_eq!(enumerate_wp(0), Err(Error::ZeroRank));
    }

    #[test]
    fn enumeration_counts() {
        for n in 1..=10 {
            let all = enumerate_wp(n).unwrap();
            assert_eq!(all.len(), 1 << (n - 1));
            assert!(all.windows(2).all(|p| p[0] < p[1]));
            assert!(all[0].is_identity());
        }
    }

    #[test]
    fn generator_moves() {
        assert_eq!(seq("-+-+").apply_generator(gen(3)), Move::Longer(seq("-++-")));
        assert_eq!(seq("++++").apply_generator(gen(0)), Move::Longer(seq("--++")));
        assert_eq!(seq("++++").apply_generator(gen(1)), Move::NotInQuotient);
        assert_eq!(seq("--++").apply_generator(gen(0)), Move::Shorter(seq("++++")));
        assert_eq!(seq("-+-+").apply_generator(gen(0)), Move::NotInQuotient);
        assert_eq!(seq("+").apply_generator(gen(0)), Move::NotInQuotient);
        assert!(GeneratorIndex::new(4, 4).is_err());
    }

    #[test]
    fn generator_moves_are_involutive() {
        for n in 1..=8 {
            for w in enumerate_wp(n).unwrap() {
                for i in GeneratorIndex::all(n) {
                    match w.apply_generator(i) {
                        Move::Longer(v) => assert_eq!(v.apply_generator(i), Move::Shorter(w.clone())),
                        Move::Shorter(v) => assert_eq!(v.apply_generator(i), Move::Longer(w.clone())),
                        Move::NotInQuotient => {}
                    }
                }
            }
        }
    }

    #[test]
    fn halfseq_words_replay() {
        let table = [
            ("++++", ""),
            ("--++", "0"),
            ("-+-+", "0,2"),
            ("-++-", "0,2,3"),
            ("+--+", "0,2,1"),
            ("+-+-", "0,2,3,1"),
            ("++--", "0,2,3,1,2"),
            ("----", "0,2,3,1,2,0"),
        ];
        for (s, word) in table {
            let w = seq(s);
            let word = parse_word(word, 4).unwrap();
            assert_eq!(PMSequence::from_word(4, &word).unwrap(), w);
            assert_eq!(w.reduced_word(), word, "reduced word of {s}");
            assert_eq!(w.length(), word.len());
        }
    }

    #[test]
    fn young_diagram_examples() {
        assert_eq!(seq("++++").young_diagram().box_count(), 0);
        let d = seq("-+-").young_diagram();
        assert_eq!(d.rows(), &[3, 2, 1]);
        let d = seq("+-+-").young_diagram();
        assert_eq!(d.rows(), &[4, 3, 2, 1]);
        assert_eq!(d.box_count(), 10);
        assert_eq!(d.length(), 4);
        assert_eq!(d.off_diagonal_count() / 2, 4);
        assert_eq!(seq("----").young_diagram().rows(), &[4, 4, 4, 4]);
    }

    #[test]
    fn lengths() {
        assert_eq!(seq("++++").length(), 0);
        assert_eq!(seq("--++").length(), 1);
        assert_eq!(seq("----").length(), 6);
    }

    #[test]
    fn replay_is_strictly_increasing() {
        for n in 1..=8 {
            for w in enumerate_wp(n).unwrap() {
                let word = w.reduced_word();
                assert_eq!(word.len(), w.length());
                assert_eq!(PMSequence::from_word(n, &word).unwrap(), w);
                let d = w.young_diagram();
                assert_eq!(d.length(), w.length());
                assert_eq!(d.off_diagonal_count() / 2, w.length());
            }
        }
    }

    fn partitions_in_square(n: usize) -> Vec<Vec<usize>> {
        fn rec(n: usize, row: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if row == n {
                out.push(cur.clone());
                return;
            }
            for len in 0..=max {
                cur.push(len);
                rec(n, row + 1, len, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, 0, n, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn young_diagram_bijection() {
        for n in 1..=8 {
            let valid: std::collections::BTreeSet<SymYoungDiagram> = partitions_in_square(n)
                .into_iter()
                .filter_map(|rows| SymYoungDiagram::from_rows(n, rows).ok())
                .collect();
            let image: std::collections::BTreeSet<SymYoungDiagram> =
                enumerate_wp(n).unwrap().iter().map(|w| w.young_diagram()).collect();
            assert_eq!(image.len(), 1 << (n - 1));
            assert_eq!(valid, image, "n = {n}");
            for d in &valid {
                assert_eq!(&d.to_sequence().young_diagram(), d);
            }
        }
    }

    #[test]
    fn parsing() {
        assert_eq!("|-+-+]".parse::<PMSequence>().unwrap(), seq("-+-+"));
        assert_eq!(
            "-+x+".parse::<PMSequence>(),
            Err(Error::InvalidSign {
                position: 3,
                found: 'x'
            })
        );
        assert_eq!("-++".parse::<PMSequence>(), Err(Error::OddMinusCount { minuses: 1 }));
        assert!(PMSequence::parse_with_rank("++", 4).is_err());
        assert!(parse_word("0,x", 4).is_err());
        assert_eq!(format_word(&parse_word("0, 2,3", 4).unwrap()), "0,2,3");
    }

    #[test]
    fn all_reduced_words_replay() {
        for w in enumerate_wp(5).unwrap() {
            let words = w.all_reduced_words();
            assert!(words.contains(&w.reduced_word()));
            for word in words {
                assert_eq!(PMSequence::from_word(5, &word).unwrap(), w);
            }
        }
    }

    #[test]
    fn dynkin_exponents() {
        assert_eq!(coxeter_m(0, 2), 3);
        assert_eq!(coxeter_m(1, 2), 3);
        assert_eq!(coxeter_m(0, 1), 2);
        assert_eq!(coxeter_m(2, 3), 3);
        assert_eq!(coxeter_m(1, 3), 2);
        assert_eq!(coxeter_m(3, 3), 1);
    }
}
