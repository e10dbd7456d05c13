use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepToken {
    pub form: String,
    pub lemma: Option<String>,
    /// Index of the head token, `None` for the root.
    pub head: Option<usize>,
    pub deprel: String,
}

impl DepToken {
    pub fn new(form: impl Into<String>, head: Option<usize>, deprel: impl Into<String>) -> Self {
        DepToken {
            form: form.into(),
            lemma: None,
            head,
            deprel: deprel.into(),
        }
    }

    pub fn with_lemma(mut self, lemma: impl Into<String>) -> Self {
        self.lemma = Some(lemma.into());
        self
    }
}

/// A dependency tree over one sentence, with 0-based head indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyParse {
    tokens: Vec<DepToken>,
    root: usize,
    depth: Vec<usize>,
    /// `# key = value` comments from the source block.
    pub metadata: BTreeMap<String, String>,
}

impl DependencyParse {
    /// Checks that heads are in range, there is exactly one root and every
    /// head chain reaches it.
    pub fn new(tokens: Vec<DepToken>) -> Result<Self> {
        let n = tokens.len();
        if n == 0 {
            return Err(Error::InvalidTree("no tokens".into()));
        }
        let roots: Vec<usize> = (0..n).filter(|i| tokens[*i].head.is_none()).collect();
        match roots.len() {
            0 => return Err(Error::InvalidTree("no root".into())),
            1 => {}
            count => return Err(Error::MultipleRoots { line: 0, count }),
        }
        if let Some((i, h)) = tokens
            .iter()
            .enumerate()
            .find_map(|(i, t)| t.head.filter(|h| *h >= n || *h == i).map(|h| (i, h)))
        {
            return Err(Error::InvalidTree(format!("token {i} has head {h}")));
        }

        let mut depth: Vec<Option<usize>> = vec![None; n];
        for start in 0..n {
            let mut chain = Vec::new();
            let mut cur = start;
            let base = loop {
                if let Some(d) = depth[cur] {
                    break d;
                }
                match tokens[cur].head {
                    None => {
                        depth[cur] = Some(0);
                        break 0;
                    }
                    Some(h) => {
                        chain.push(cur);
                        if chain.len() > n {
                            return Err(Error::InvalidTree(format!("cycle through token {start}")));
                        }
                        cur = h;
                    }
                }
            };
            for (k, t) in chain.iter().rev().enumerate() {
                depth[*t] = Some(base + k + 1);
            }
        }

        Ok(DependencyParse {
            tokens,
            root: roots[0],
            depth: depth.into_iter().map(|d| d.unwrap_or(0)).collect(),
            metadata: BTreeMap::new(),
        })
    }

    pub fn tokens(&self) -> &[DepToken] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Head edges between a token and the root.
    pub fn depth(&self, token: usize) -> usize {
        self.depth[token]
    }

    /// Head edges from `token` up to `ancestor`, if it is one.
    pub fn hops_to(&self, token: usize, ancestor: usize) -> Option<usize> {
        let mut cur = token;
        let mut hops = 0;
        loop {
            if cur == ancestor {
                return Some(hops);
            }
            cur = self.tokens[cur].head?;
            hops += 1;
        }
    }

    pub fn forms(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.form.as_str())
    }
}

/// Reads the 10-column dependency format. Blocks are separated by blank
/// lines; multiword ranges (`3-4`) and empty nodes (`5.1`) are skipped.
pub fn ingest_conllu(text: &str) -> Result<Vec<DependencyParse>> {
    let mut out = Vec::new();
    let mut block: Vec<DepToken> = Vec::new();
    let mut metadata = BTreeMap::new();
    let mut block_start = None;

    let finish = |block: &mut Vec<DepToken>,
                  metadata: &mut BTreeMap<String, String>,
                  start: Option<usize>,
                  out: &mut Vec<DependencyParse>|
     -> Result<()> {
        if block.is_empty() {
            metadata.clear();
            return Ok(());
        }
        let tokens = std::mem::take(block);
        let start = start.unwrap_or(0);
        let mut parse = DependencyParse::new(tokens).map_err(|e| match e {
            Error::MultipleRoots { count, .. } => Error::MultipleRoots { line: start, count },
            Error::InvalidTree(m) => Error::InvalidTree(format!("sentence at line {start}: {m}")),
            other => other,
        })?;
        parse.metadata = std::mem::take(metadata);
        out.push(parse);
        Ok(())
    };

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            finish(&mut block, &mut metadata, block_start.take(), &mut out)?;
            continue;
        }
        block_start.get_or_insert(line_no);
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((k, v)) = comment.split_once('=') {
                metadata.insert(k.trim().to_string(), v.trim().to_string());
            }
            continue;
        }
        let bad = |message: String| Error::MalformedRow {
            line: line_no,
            message,
        };
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(bad(format!("expected 10 tab-separated columns, found {}", cols.len())));
        }
        if cols[0].contains('-') || cols[0].contains('.') {
            continue;
        }
        let id: usize = cols[0]
            .parse()
            .map_err(|_| bad(format!("token id `{}` is not an integer", cols[0])))?;
        if id != block.len() + 1 {
            return Err(bad(format!("token id {id} out of sequence")));
        }
        let head: usize = cols[6]
            .parse()
            .map_err(|_| bad(format!("head `{}` is not an integer", cols[6])))?;
        let lemma = (cols[2] != "_").then(|| cols[2].to_string());
        block.push(DepToken {
            form: cols[1].to_string(),
            lemma,
            head: head.checked_sub(1),
            deprel: cols[7].to_string(),
        });
    }
    finish(&mut block, &mut metadata, block_start, &mut out)?;
    Ok(out)
}
