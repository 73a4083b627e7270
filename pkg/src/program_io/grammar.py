"""
grammar.py

parglare grammar of the program format.

    fact r1(a,b).
    tgd r1(X,Y) -> exists Z: r3(Y,Z).
    egd data(O,A,V), data(O,A,W), funct(A,O) -> V = W.
    query q(X) :- r1(X,Y), r2(Y).

Lowercase or digit-initial identifiers are constants and predicates, uppercase-initial ones are
variables, `_:n<k>` is a labeled null. `%` starts a line comment.
"""

PROGRAM_GRAMMAR = r"""
Program: Statement*;
Statement: Fact | Tgd | Egd | Query;

Fact: "fact" Atom Dot;
Tgd: "tgd" Atoms "->" Head Dot;
Head: Atoms | "exists" Vars ":" Atoms;
Egd: "egd" Atoms "->" Var "=" Var Dot;
Query: "query" Name QueryHead QueryBody Dot;
QueryHead: "(" Vars ")" | "(" ")" | EMPTY;
QueryBody: ":-" Atoms | EMPTY;

Atoms: Atom+[Comma];
Atom: Name | Name "(" ")" | Name "(" Terms ")";
Vars: Var+[Comma];
Terms: Term+[Comma];
Term: Name | Var | Null;

LAYOUT: LayoutItem | LAYOUT LayoutItem | EMPTY;
LayoutItem: WS | Comment;

terminals
Name: /[a-z0-9][A-Za-z0-9_]*/;
Var: /[A-Z][A-Za-z0-9_]*/;
Null: /_:n[0-9]+/;
Comma: ",";
Dot: ".";
WS: /\s+/;
Comment: /%[^\n]*/;
KEYWORD: /[A-Za-z_][A-Za-z0-9_]*/;
"""
