use procdsl::ViewModel;

/// Renders a view as a table: a header row, then one row per entry in view
/// order. Columns are padded to the widest cell; the last one is not.
pub fn render(view: &ViewModel) -> String {
    let with_access = view.entries.iter().any(|e| e.access.is_some());
    let with_role = view.entries.iter().any(|e| e.role.is_some());

    let mut header = vec!["POSITION", "NAME", "SPAN"];
    if with_access {
        header.push("ACCESS");
    }
    if with_role {
        header.push("ROLE");
    }
    header.extend(["RESULTS", "DESCRIPTION"]);

    let mut rows: Vec<Vec<String>> = vec![header.into_iter().map(str::to_owned).collect()];
    for e in &view.entries {
        let mut row = vec![
            e.position.to_string(),
            e.name.clone(),
            e.span
                .map_or_else(|| "-".to_owned(), |s| format!("{}-{}", s.start, s.end)),
        ];
        if with_access {
            row.push(e.access.map_or_else(|| "-".to_owned(), |a| a.to_string()));
        }
        if with_role {
            row.push(match e.role {
                Some(role) => serde_json::to_value(role)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_owned))
                    .unwrap_or_default(),
                None => "-".to_owned(),
            });
        }
        let results: Vec<&str> = e.results.iter().map(|r| r.name.as_str()).collect();
        row.push(if results.is_empty() {
            "-".to_owned()
        } else {
            results.join(",")
        });
        row.push(e.description.clone());
        rows.push(row);
    }

    let columns = rows[0].len();
    let widths: Vec<usize> = (0..columns)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c + 1 == columns {
                line.push_str(cell);
            } else {
                line.push_str(cell);
                line.extend(std::iter::repeat_n(' ', widths[c] - cell.chars().count() + 2));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
