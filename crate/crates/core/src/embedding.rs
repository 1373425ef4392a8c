//! Loading pre-trained word vectors and projecting them onto the unit
//! sphere.
//!
//! Two vector formats are read:
//!
//! * text: one `token v_1 … v_d` line per word, whitespace separated
//!   (the GloVe distribution format);
//! * word2vec binary: an ASCII header `<count> <dim>\n`, then per record
//!   the token bytes up to the first space followed by `dim` little-endian
//!   `f32` values and an optional newline.
//!
//! Word lists are UTF-8, one token per line; blank lines and lines starting
//! with `#` are ignored.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, ErrorKind, Write};
use std::path::{Path, PathBuf};

use log::warn;

use crate::error::{Error, Result};
use crate::simplex::VertexId;
use crate::vr::MetricCloud;

/// Token → vector map with a fixed dimension and insertion order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WordEmbedding {
    tokens: Vec<String>,
    vectors: Vec<Vec<f32>>,
    index: HashMap<String, usize>,
    dim: Option<usize>,
}

impl WordEmbedding {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a token. Fails on a duplicate token or a dimension mismatch.
    pub fn insert(&mut self, token: String, vector: Vec<f32>) -> Result<()> {
        match self.dim {
            Some(d) if d != vector.len() => {
                return Err(Error::domain(format!(
                    "vector for {token:?} has dimension {}, expected {d}",
                    vector.len()
                )))
            }
            _ => self.dim = Some(vector.len()),
        }
        if self.index.contains_key(&token) {
            return Err(Error::DuplicateToken {
                path: PathBuf::new(),
                token,
            });
        }
        self.index.insert(token.clone(), self.tokens.len());
        self.tokens.push(token);
        self.vectors.push(vector);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// `None` until the first vector is added.
    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn get(&self, token: &str) -> Option<&[f32]> {
        self.index.get(token).map(|&i| self.vectors[i].as_slice())
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f32])> {
        self.tokens
            .iter()
            .map(String::as_str)
            .zip(self.vectors.iter().map(Vec::as_slice))
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

/// Reads the whitespace-separated text format. Blank lines are skipped.
pub fn read_text_vectors<R: BufRead>(
    reader: R,
    path: &Path,
    expected_dim: Option<usize>,
) -> Result<WordEmbedding> {
    let mut emb = WordEmbedding::new();
    let mut dim = expected_dim;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        let mut fields = line.split_whitespace();
        let Some(token) = fields.next() else {
            continue;
        };
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: line_no,
            message,
        };
        let vector = fields
            .map(|f| {
                f.parse::<f32>()
                    .map_err(|_| parse_err(format!("cannot parse {f:?} as a number")))
            })
            .collect::<Result<Vec<f32>>>()?;
        match dim {
            Some(d) if d != vector.len() => {
                return Err(parse_err(format!(
                    "expected {d} components, found {}",
                    vector.len()
                )))
            }
            None => dim = Some(vector.len()),
            _ => {}
        }
        if emb.get(token).is_some() {
            return Err(Error::DuplicateToken {
                path: path.to_path_buf(),
                token: token.to_owned(),
            });
        }
        emb.insert(token.to_owned(), vector)?;
    }
    Ok(emb)
}

pub fn load_text_vectors(
    path: impl AsRef<Path>,
    expected_dim: Option<usize>,
) -> Result<WordEmbedding> {
    let path = path.as_ref();
    read_text_vectors(BufReader::new(open(path)?), path, expected_dim)
}

/// Writes the text format. Floats use the shortest representation that
/// parses back to the same `f32`, so reloading is exact.
pub fn write_text_vectors<W: Write>(emb: &WordEmbedding, mut out: W) -> std::io::Result<()> {
    for (token, vector) in emb.iter() {
        out.write_all(token.as_bytes())?;
        for x in vector {
            write!(out, " {x}")?;
        }
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn save_text_vectors(emb: &WordEmbedding, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_text_vectors(emb, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

struct CountingReader<R> {
    inner: R,
    offset: u64,
}

impl<R: BufRead> CountingReader<R> {
    fn peek(&mut self) -> std::io::Result<Option<u8>> {
        Ok(self.inner.fill_buf()?.first().copied())
    }

    fn consume(&mut self, n: usize) {
        self.inner.consume(n);
        self.offset += n as u64;
    }

    /// Bytes up to (not including) `delim`; the delimiter is consumed.
    /// `None` if the stream ends first.
    fn read_until_delim(&mut self, delim: u8) -> std::io::Result<Option<Vec<u8>>> {
        let mut buf = Vec::new();
        let n = self.inner.read_until(delim, &mut buf)?;
        self.offset += n as u64;
        if buf.last() == Some(&delim) {
            buf.pop();
            Ok(Some(buf))
        } else {
            Ok(None)
        }
    }

    fn read_exact(&mut self, buf: &mut [u8]) -> std::io::Result<()> {
        self.inner.read_exact(buf)?;
        self.offset += buf.len() as u64;
        Ok(())
    }
}

/// Reads the word2vec binary format. When `wordlist` is given only those
/// tokens are kept; the rest are skipped while streaming.
pub fn read_word2vec_binary<R: BufRead>(
    reader: R,
    path: &Path,
    wordlist: Option<&HashSet<String>>,
) -> Result<WordEmbedding> {
    let mut r = CountingReader {
        inner: reader,
        offset: 0,
    };
    let bin_err = |offset: u64, message: String| Error::Binary {
        path: path.to_path_buf(),
        offset,
        message,
    };
    let io_err = |e| Error::io(path, e);

    let header = r
        .read_until_delim(b'\n')
        .map_err(io_err)?
        .ok_or_else(|| bin_err(0, "missing header line".into()))?;
    let header = String::from_utf8(header).map_err(|_| bin_err(0, "header is not ASCII".into()))?;
    let mut parts = header.split_whitespace();
    let (count, dim) = match (
        parts.next().and_then(|s| s.parse::<usize>().ok()),
        parts.next().and_then(|s| s.parse::<usize>().ok()),
        parts.next(),
    ) {
        (Some(c), Some(d), None) => (c, d),
        _ => {
            return Err(bin_err(
                0,
                format!("malformed header {header:?}, expected \"<count> <dim>\""),
            ))
        }
    };

    let mut emb = WordEmbedding::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut raw = vec![0u8; dim * 4];
    for record in 0..count {
        // records may be separated by a newline
        while r.peek().map_err(io_err)? == Some(b'\n') {
            r.consume(1);
        }
        let start = r.offset;
        let token = r.read_until_delim(b' ').map_err(io_err)?.ok_or_else(|| {
            bin_err(
                start,
                format!("truncated file: header promises {count} records, found {record}"),
            )
        })?;
        let token = String::from_utf8_lossy(&token).into_owned();
        let vec_start = r.offset;
        r.read_exact(&mut raw).map_err(|e| {
            if e.kind() == ErrorKind::UnexpectedEof {
                bin_err(
                    vec_start,
                    format!(
                        "truncated record for {token:?}: expected {} bytes of vector data",
                        dim * 4
                    ),
                )
            } else {
                Error::io(path, e)
            }
        })?;
        if !seen.insert(token.clone()) {
            return Err(Error::DuplicateToken {
                path: path.to_path_buf(),
                token,
            });
        }
        if wordlist.is_some_and(|w| !w.contains(&token)) {
            continue;
        }
        let vector = raw
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
            .collect();
        emb.insert(token, vector)?;
    }
    if emb.dim.is_none() && count > 0 && wordlist.is_none() {
        emb.dim = Some(dim);
    }
    Ok(emb)
}

pub fn load_word2vec_binary(
    path: impl AsRef<Path>,
    wordlist: Option<&HashSet<String>>,
) -> Result<WordEmbedding> {
    let path = path.as_ref();
    read_word2vec_binary(BufReader::new(open(path)?), path, wordlist)
}

/// Writes the word2vec binary format, one newline after each record.
pub fn write_word2vec_binary<W: Write>(emb: &WordEmbedding, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {}", emb.len(), emb.dim().unwrap_or(0))?;
    for (token, vector) in emb.iter() {
        out.write_all(token.as_bytes())?;
        out.write_all(b" ")?;
        for x in vector {
            out.write_all(&x.to_le_bytes())?;
        }
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn read_wordlist<R: BufRead>(reader: R, path: &Path) -> Result<Vec<String>> {
    let mut words = Vec::new();
    for line in reader.lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        words.push(t.to_owned());
    }
    Ok(words)
}

pub fn load_wordlist(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    read_wordlist(BufReader::new(open(path)?), path)
}

/// Words placed on the unit sphere with the geodesic metric. Vertex `i`
/// of every downstream complex is `words[i]`.
#[derive(Clone, Debug)]
pub struct WordCloud {
    words: Vec<String>,
    cloud: MetricCloud,
    index: HashMap<String, VertexId>,
}

impl WordCloud {
    /// Pairs words with already-normalized points.
    pub fn new(words: Vec<String>, cloud: MetricCloud) -> Result<Self> {
        if words.len() != cloud.len() {
            return Err(Error::domain(format!(
                "{} words for {} points",
                words.len(),
                cloud.len()
            )));
        }
        let mut index = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(Error::domain(format!("word {w:?} listed twice")));
            }
        }
        Ok(WordCloud {
            words,
            cloud,
            index,
        })
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn word(&self, v: VertexId) -> &str {
        &self.words[v]
    }

    pub fn cloud(&self) -> &MetricCloud {
        &self.cloud
    }

    pub fn vertex(&self, word: &str) -> Option<VertexId> {
        self.index.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Projects the requested words onto the unit sphere, `v / ‖v‖`, keeping
/// the order of `words`.
///
/// Missing words are an error listing all of them, unless `skip_missing`
/// is set, in which case they are dropped with a warning. A zero vector is
/// always an error. Points that coincide after normalization only warn.
pub fn normalize_to_sphere(
    emb: &WordEmbedding,
    words: &[String],
    skip_missing: bool,
) -> Result<WordCloud> {
    let missing: Vec<String> = words
        .iter()
        .filter(|w| emb.get(w).is_none())
        .cloned()
        .collect();
    if !missing.is_empty() {
        if !skip_missing {
            return Err(Error::MissingWords(missing));
        }
        warn!(
            "skipping {} missing words: {}",
            missing.len(),
            missing.join(", ")
        );
    }

    let mut kept = Vec::new();
    let mut points = Vec::new();
    let mut seen = HashSet::new();
    for w in words {
        let Some(v) = emb.get(w) else { continue };
        if !seen.insert(w.as_str()) {
            return Err(Error::Config(format!(
                "word {w:?} listed twice in the word list"
            )));
        }
        let v: Vec<f64> = v.iter().map(|&x| f64::from(x)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector(w.clone()));
        }
        points.push(v.iter().map(|x| x / n).collect::<Vec<f64>>());
        kept.push(w.clone());
    }

    let mut by_bits: HashMap<Vec<u64>, usize> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        let key = p.iter().map(|x| x.to_bits()).collect();
        if let Some(&j) = by_bits.get(&key) {
            warn!(
                "{:?} and {:?} coincide on the unit sphere",
                kept[j], kept[i]
            );
        } else {
            by_bits.insert(key, i);
        }
    }

    WordCloud::new(kept, MetricCloud::geodesic(points)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn p() -> &'static Path {
        Path::new("fixture")
    }

    fn text(s: &str) -> Result<WordEmbedding> {
        read_text_vectors(Cursor::new(s), p(), None)
    }

    #[test]
    fn text_basic() {
        let e = text("a 1.0 0.0\nb 0.0 1.0").unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.dim(), Some(2));
        assert_eq!(e.get("b"), Some(&[0.0f32, 1.0][..]));
    }

    #[test]
    fn text_ragged_reports_line() {
        match text("a 1.0 0.0\nb 0.0 1.0 2.0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn text_expected_dim() {
        assert!(read_text_vectors(Cursor::new("a 1 2\n"), p(), Some(3)).is_err());
    }

    #[test]
    fn text_bad_number() {
        assert!(matches!(
            text("a 1.0 zz\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn text_empty_and_duplicates() {
        let e = text("").unwrap();
        assert!(e.is_empty());
        assert_eq!(e.dim(), None);
        match text("a 1\nb 2\na 3\n") {
            Err(Error::DuplicateToken { token, .. }) => assert_eq!(token, "a"),
            other => panic!("unexpected {other:?}"),
        }
    }

    fn w2v_bytes(records: &[(&str, &[f32])], dim: usize, count: usize) -> Vec<u8> {
        let mut out = format!("{count} {dim}\n").into_bytes();
        for (t, v) in records {
            out.extend_from_slice(t.as_bytes());
            out.push(b' ');
            for x in *v {
                out.extend_from_slice(&x.to_le_bytes());
            }
            out.push(b'\n');
        }
        out
    }

    #[test]
    fn word2vec_basic() {
        let bytes = w2v_bytes(&[("x", &[1.0, 2.0, 3.0]), ("y", &[0.5, -1.0, 0.0])], 3, 2);
        let e = read_word2vec_binary(Cursor::new(bytes), p(), None).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.dim(), Some(3));
        assert_eq!(e.get("y"), Some(&[0.5f32, -1.0, 0.0][..]));
    }

    #[test]
    fn word2vec_without_record_newlines() {
        let mut bytes = b"2 1\n".to_vec();
        for (t, x) in [("p", 1.0f32), ("q", 2.0)] {
            bytes.extend_from_slice(t.as_bytes());
            bytes.push(b' ');
            bytes.extend_from_slice(&x.to_le_bytes());
        }
        let e = read_word2vec_binary(Cursor::new(bytes), p(), None).unwrap();
        assert_eq!(e.tokens(), &["p".to_owned(), "q".to_owned()]);
    }

    #[test]
    fn word2vec_wordlist_filter() {
        let recs: Vec<(&str, &[f32])> = vec![
            ("river", &[1.0, 0.0]),
            ("bank", &[0.0, 1.0]),
            ("money", &[1.0, 1.0]),
            ("water", &[2.0, 0.0]),
            ("loan", &[0.0, 2.0]),
        ];
        let bytes = w2v_bytes(&recs, 2, 5);
        let wl: HashSet<String> = ["bank".to_owned()].into();
        let e = read_word2vec_binary(Cursor::new(bytes), p(), Some(&wl)).unwrap();
        assert_eq!(e.tokens(), &["bank".to_owned()]);
        assert_eq!(e.get("bank"), Some(&[0.0f32, 1.0][..]));
    }

    #[test]
    fn word2vec_truncation() {
        let bytes = w2v_bytes(&[("x", &[1.0, 2.0])], 2, 3);
        match read_word2vec_binary(Cursor::new(bytes), p(), None) {
            Err(Error::Binary {
                offset, message, ..
            }) => {
                assert_eq!(offset, 4 + 2 + 8 + 1);
                assert!(message.contains("truncated"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        let mut bytes = w2v_bytes(&[("x", &[1.0, 2.0])], 2, 1);
        bytes.truncate(bytes.len() - 3);
        match read_word2vec_binary(Cursor::new(bytes), p(), None) {
            Err(Error::Binary { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn word2vec_bad_header() {
        for h in ["", "abc\n", "3\n", "3 4 5\n"] {
            assert!(
                matches!(
                    read_word2vec_binary(Cursor::new(h.as_bytes().to_vec()), p(), None),
                    Err(Error::Binary { .. })
                ),
                "{h:?}"
            );
        }
    }

    #[test]
    fn word2vec_write_read() {
        let mut e = WordEmbedding::new();
        e.insert("a".into(), vec![0.1, -7.25]).unwrap();
        e.insert("β".into(), vec![3.0, 1e-30]).unwrap();
        let mut buf = Vec::new();
        write_word2vec_binary(&e, &mut buf).unwrap();
        assert_eq!(
            read_word2vec_binary(Cursor::new(buf), p(), None).unwrap(),
            e
        );
    }

    #[test]
    fn wordlist_comments() {
        let w = read_wordlist(Cursor::new("# finance\nbank\n\n  river \n#x\nloan\n"), p()).unwrap();
        assert_eq!(w, vec!["bank", "river", "loan"]);
    }

    #[test]
    fn normalize_examples() {
        let e = text("a 3 4\nb 0 1\nz 0 0\n").unwrap();
        let wc = normalize_to_sphere(&e, &["a".into(), "b".into()], false).unwrap();
        let a = wc.cloud().point(0);
        assert!((a[0] - 0.6).abs() < 1e-7 && (a[1] - 0.8).abs() < 1e-7);
        assert!((wc.cloud().point(1)[1] - 1.0).abs() < 1e-12);
        assert_eq!(wc.vertex("b"), Some(1));

        assert!(matches!(
            normalize_to_sphere(&e, &["z".into()], false),
            Err(Error::ZeroVector(w)) if w == "z"
        ));
    }

    #[test]
    fn normalize_missing_words() {
        let e = text("a 3 4\n").unwrap();
        let words: Vec<String> = vec!["q".into(), "a".into(), "r".into()];
        match normalize_to_sphere(&e, &words, false) {
            Err(Error::MissingWords(m)) => assert_eq!(m, vec!["q", "r"]),
            other => panic!("unexpected {other:?}"),
        }
        let wc = normalize_to_sphere(&e, &words, true).unwrap();
        assert_eq!(wc.words(), &["a".to_owned()]);
    }

    #[test]
    fn normalize_keeps_order_and_allows_duplicates() {
        let e = text("a 1 0\nb 2 0\nc 0 1\n").unwrap();
        let words: Vec<String> = vec!["c".into(), "b".into(), "a".into()];
        let wc = normalize_to_sphere(&e, &words, false).unwrap();
        assert_eq!(wc.words(), words.as_slice());
        assert_eq!(wc.cloud().distance(1, 2), 0.0);
    }
}
