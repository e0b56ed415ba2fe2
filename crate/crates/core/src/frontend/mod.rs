//! Specification frontend: parsing, GR(1) shape validation and compilation
//! of integer variables down to boolean propositions.

mod ast;
mod compile;
mod parser;
mod validate;

pub use ast::{CmpOp, Domain, ExprNode, Part, PartKind, SpecDocument, VarDecl, VarKind};
pub use compile::{
    compile_to_boolean, BooleanSpec, CompileError, IntEncoding, PartOrigin, Proposition, SpecPart,
};
pub use parser::{parse_expr, parse_spec, ParseError, ParseErrorKind};
pub use validate::{validate_gr1_shape, ShapeRule, ShapeViolation};
