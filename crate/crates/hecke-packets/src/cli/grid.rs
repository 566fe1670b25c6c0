//! Parser for the `--grid` flag: comma-separated clauses naming values
//! for `n` and `q`, e.g. `n=2..4,q=3,5,7`. A clause starts at a token
//! containing `=`; bare tokens extend the most recent clause. Ranges
//! `a..b` are inclusive on both ends.

pub fn parse_grid(spec: &str) -> Result<(Vec<u64>, Vec<u64>), String> {
    let mut ns: Vec<u64> = Vec::new();
    let mut qs: Vec<u64> = Vec::new();
    let mut current: Option<char> = None;

    for token in spec.split(',') {
        let token = token.trim();
        if token.is_empty() {
            return Err("empty token in grid spec".into());
        }
        let value = if let Some((name, rest)) = token.split_once('=') {
            current = match name.trim() {
                "n" => Some('n'),
                "q" | "p" => Some('q'),
                other => return Err(format!("unknown grid variable `{other}`")),
            };
            rest.trim()
        } else {
            token
        };
        let target = match current {
            Some('n') => &mut ns,
            Some('q') => &mut qs,
            _ => return Err(format!("value `{token}` appears before any `n=` or `q=`")),
        };
        target.extend(parse_values(value)?);
    }

    if ns.is_empty() || qs.is_empty() {
        return Err("grid must give at least one n and one q".into());
    }
    ns.sort_unstable();
    ns.dedup();
    qs.sort_unstable();
    qs.dedup();
    Ok((ns, qs))
}

fn parse_values(value: &str) -> Result<Vec<u64>, String> {
    if let Some((lo, hi)) = value.split_once("..") {
        let lo: u64 = lo
            .trim()
            .parse()
            .map_err(|_| format!("bad range start `{lo}`"))?;
        let hi: u64 = hi
            .trim()
            .parse()
            .map_err(|_| format!("bad range end `{hi}`"))?;
        if lo > hi {
            return Err(format!("empty range `{value}`"));
        }
        Ok((lo..=hi).collect())
    } else {
        let v: u64 = value
            .parse()
            .map_err(|_| format!("bad integer `{value}`"))?;
        Ok(vec![v])
    }
}
