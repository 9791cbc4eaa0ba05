#![allow(dead_code)]

pub mod catalog;
pub mod oracle;

use std::path::PathBuf;

use tableqa::harness::{build_question_problem, Config};
use tableqa::ilp::IlpProblem;
use tableqa::knowledge::{load_corpus, Table, TableCorpus};
use tableqa::question::{load_questions, Question};
use tableqa::text::Stopwords;

pub fn fixture_dir(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub struct Fixture {
    pub corpus: TableCorpus,
    pub question: Question,
}

impl Fixture {
    pub fn load(name: &str) -> Fixture {
        let dir = fixture_dir(name);
        let corpus = load_corpus(&dir).unwrap();
        let mut qs = load_questions(&dir.join("question.json"), &Stopwords::bundled()).unwrap();
        Fixture { corpus, question: qs.remove(0) }
    }

    pub fn problem(&self, config: &Config) -> IlpProblem {
        build_question_problem(&self.question, &self.corpus, config).unwrap()
    }

    /// Tables in the order of a problem's table ids.
    pub fn tables_of(&self, problem: &IlpProblem) -> Vec<&Table> {
        problem.table_ids.iter().map(|id| self.corpus.table(id).unwrap()).collect()
    }
}

/// Index of the single option switched on in an assignment.
pub fn chosen_option(problem: &IlpProblem, values: &[bool]) -> Option<usize> {
    use tableqa::ilp::{Element, VarKind};
    let on: Vec<usize> = problem
        .vars
        .iter()
        .zip(values)
        .filter(|(v, &x)| x && v.kind() == Some(VarKind::ActiveOption))
        .map(|(v, _)| match v.meta.as_ref().unwrap().ends[0] {
            Element::Option { m } => m,
            _ => unreachable!(),
        })
        .collect();
    (on.len() == 1).then(|| on[0])
}

pub mod small {
    //! Hand-built models small enough for exhaustive enumeration.

    use tableqa::alignment::OverlapScorer;
    use tableqa::ilp::{build_problem, IlpProblem, ModelContext, ModelParams, TableView};
    use tableqa::knowledge::{JoinMap, Table};
    use tableqa::question::Question;
    use tableqa::text::Stopwords;

    pub struct Small {
        pub tables: Vec<Table>,
        pub join_map: JoinMap,
        pub question: Question,
        pub params: ModelParams,
    }

    impl Small {
        pub fn problem(&self) -> IlpProblem {
            let views = self.tables.iter().map(TableView::all_rows).collect();
            let ctx = ModelContext::new(&self.question, views, &self.join_map).unwrap();
            build_problem(&ctx, &OverlapScorer::new(Stopwords::bundled()), &self.params).unwrap()
        }

        pub fn table_refs(&self) -> Vec<&Table> {
            self.tables.iter().collect()
        }
    }

    fn table(id: &str, headers: &[&str], rows: &[&[&str]]) -> Table {
        Table::new(
            id,
            id,
            headers.iter().map(|s| s.to_string()).collect(),
            rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect(),
        )
        .unwrap()
    }

    /// Two tables chained through a join: a one-column table whose cell
    /// matches the question, and a two-column table whose second column
    /// matches an option. Rows need only one active cell so the one-column
    /// table can take part.
    pub fn chained() -> Small {
        let tables = vec![table("pets", &["name"], &[&["green frog"]]), table("needs", &["name", "kind"], &[&["frog", "fresh"]])];
        let mut join_map = JoinMap::new();
        join_map.insert("pets", 0, "needs", 0, 1);
        let question = Question::parse(
            "chain",
            "What does a green creature need?",
            &["fresh water", "salt"],
            Some(0),
            &Stopwords::bundled(),
        )
        .unwrap();
        let mut params = ModelParams::default();
        params.constants.min_active_cells_per_row = 1;
        Small { tables, join_map, question, params }
    }

    /// One table whose two rows both support the same option.
    pub fn parallel() -> Small {
        let tables = vec![table("sounds", &["animal", "noise"], &[&["dog", "bark"], &["big dog", "bark"]])];
        let question = Question::parse("par", "What does a dog say?", &["bark", "meow"], Some(0), &Stopwords::bundled()).unwrap();
        Small { tables, join_map: JoinMap::new(), question, params: ModelParams::default() }
    }
}
