use std::process::{Command, Output};

fn backtrack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_backtrack")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> &str {
    std::str::from_utf8(&o.stdout).unwrap()
}

#[test]
fn queens_count_only() {
    let o = backtrack(&["queens", "--n", "4", "--mode", "derived", "--count-only"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn queens_both_at_eight() {
    let o = backtrack(&["queens", "--n", "8", "--mode", "both", "--count-only"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "92\nmatch\n");
}

#[test]
fn queens_single_cell() {
    let o = backtrack(&["queens", "--n", "1", "--mode", "naive"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn queens_empty_board_has_one_empty_solution() {
    let o = backtrack(&["queens", "--n", "0", "--mode", "both", "--count-only"]);
    assert_eq!(stdout(&o), "1\nmatch\n");
}

#[test]
fn queens_solutions_are_lexicographic() {
    let o = backtrack(&["queens", "--n", "6", "--mode", "derived"]);
    let rows: Vec<Vec<i64>> = stdout(&o).lines().map(|l| l.split(' ').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 4);
    let mut sorted = rows.clone();
    sorted.sort();
    assert_eq!(rows, sorted);
}

#[test]
fn queens_json_fields() {
    let o = backtrack(&["queens", "--n", "5", "--mode", "both", "--json", "--count-only"]);
    let objs: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(objs.len(), 3);
    assert_eq!(objs[0]["mode"], "naive");
    assert_eq!(objs[1]["mode"], "derived");
    assert_eq!(objs[0]["count"], 10);
    assert!(objs[0].get("solutions").is_none());
    assert_eq!(objs[2]["match"], true);
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["queens", "--n", "7", "--mode", "both", "--stats"][..],
        &["lawcheck", "--law", "eq07", "--law", "thm3", "--cases", "50", "--seed", "3", "--json"][..],
    ] {
        assert_eq!(backtrack(args).stdout, backtrack(args).stdout);
    }
}

#[test]
fn lawcheck_single_law() {
    let o = backtrack(&["lawcheck", "--law", "eq18", "--cases", "100", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "eq18 100 PASS\n");
}

#[test]
fn lawcheck_unknown_law_is_a_usage_error() {
    let o = backtrack(&["lawcheck", "--law", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
}

#[test]
fn usage_errors() {
    assert_eq!(backtrack(&[]).status.code(), Some(2));
    assert_eq!(backtrack(&["queens", "--mode", "naive"]).status.code(), Some(2));
    assert_eq!(backtrack(&["queens", "--n", "-1", "--mode", "naive"]).status.code(), Some(2));
    assert_eq!(backtrack(&["lawcheck", "--cases", "5"]).status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    let o = backtrack(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("lawcheck"));
}
