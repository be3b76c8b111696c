use std::fmt::Write as _;

use crate::alphabet::Alphabet;
use crate::dfa::Dfa;
use crate::error::AutomataError;

impl Dfa {
    /// Serialize as a transition table: header lines for the state count,
    /// alphabet, start state and accept set, then one `state TAB token TAB
    /// state` line per edge, ordered by (state, symbol).
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# states={}", self.state_count());
        let _ = writeln!(out, "# alphabet={}", self.alphabet().tokens().join(" "));
        let _ = writeln!(out, "# start={}", self.start());
        let accepts: Vec<String> = self.accepting_states().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "# accepts={}", accepts.join(" "));
        for state in 0..self.state_count() {
            for sym in 0..self.alphabet().len() {
                if let Some(target) = self.transition(state, sym) {
                    let _ = writeln!(out, "{state}\t{}\t{target}", self.alphabet().token(sym));
                }
            }
        }
        out
    }

    /// Parse the format written by [`Dfa::to_table`]. Errors carry the
    /// 1-based line number.
    pub fn from_table(text: &str) -> Result<Dfa, AutomataError> {
        let malformed = |line: usize, message: &str| AutomataError::MalformedTable {
            line,
            message: message.to_string(),
        };
        let mut states: Option<usize> = None;
        let mut alphabet: Option<Alphabet> = None;
        let mut start: Option<usize> = None;
        let mut accepts: Option<Vec<usize>> = None;
        let mut edges: Vec<(usize, String, usize, usize)> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("# ") {
                if let Some(v) = rest.strip_prefix("states=") {
                    states = Some(
                        v.parse()
                            .map_err(|_| malformed(line_no, "bad state count"))?,
                    );
                } else if let Some(v) = rest.strip_prefix("alphabet=") {
                    alphabet = Some(
                        Alphabet::new(v.split_whitespace())
                            .map_err(|e| malformed(line_no, &e.to_string()))?,
                    );
                } else if let Some(v) = rest.strip_prefix("start=") {
                    start = Some(
                        v.parse()
                            .map_err(|_| malformed(line_no, "bad start state"))?,
                    );
                } else if let Some(v) = rest.strip_prefix("accepts=") {
                    let parsed: Result<Vec<usize>, _> =
                        v.split_whitespace().map(|p| p.parse()).collect();
                    accepts = Some(parsed.map_err(|_| malformed(line_no, "bad accept state"))?);
                } else {
                    return Err(malformed(line_no, "unknown header"));
                }
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(malformed(line_no, "expected `state TAB token TAB state`"));
            }
            let from: usize = fields[0]
                .parse()
                .map_err(|_| malformed(line_no, "bad source state"))?;
            let to: usize = fields[2]
                .parse()
                .map_err(|_| malformed(line_no, "bad target state"))?;
            edges.push((from, fields[1].to_string(), to, line_no));
        }

        let states = states.ok_or_else(|| malformed(1, "missing `# states=` header"))?;
        let alphabet = alphabet.ok_or_else(|| malformed(1, "missing `# alphabet=` header"))?;
        let start = start.ok_or_else(|| malformed(1, "missing `# start=` header"))?;
        let accepts = accepts.ok_or_else(|| malformed(1, "missing `# accepts=` header"))?;

        let mut accepting = vec![false; states];
        for s in accepts {
            if s >= states {
                return Err(malformed(1, "accept state out of range"));
            }
            accepting[s] = true;
        }
        let mut transitions = vec![vec![None; alphabet.len()]; states];
        for (from, token, to, line_no) in edges {
            let sym = alphabet
                .index_of(&token)
                .ok_or_else(|| malformed(line_no, "token not in alphabet"))?;
            if from >= states || to >= states {
                return Err(malformed(line_no, "state out of range"));
            }
            if transitions[from][sym].is_some() {
                return Err(malformed(line_no, "duplicate transition"));
            }
            transitions[from][sym] = Some(to);
        }
        Dfa::from_parts(alphabet, start, accepting, transitions)
            .map_err(|e| malformed(1, &e.to_string()))
    }
}
