//! Formulas, path expressions and intervals: parsing, printing and
//! expansion of derived operators into the core fragment.

mod ast;
mod compile;
mod interval;
mod parser;
mod printer;

pub use ast::{BinaryOp, Formula, PathExpr, Theory, UnaryOp};
pub use compile::{
    compile_to_core, invert_past, naive_expansion, table_dispatch, untimed_expansion, CoreFormula,
    TableRow,
};
pub use interval::{Bound, Interval, IntervalError};
pub use parser::{is_keyword, parse_formula, parse_formula_any, parse_theory_text, ParseError};
pub use printer::pretty_print;
