"""
Lark grammars of the surface syntax.

Precedence: a prefix binds tighter than +, + tighter than |. Restrictions
and conditionals extend as far right as possible. A continuation after a
prefix is a single prefix, a choice, 0 or a parenthesised process, and a
trailing .0 may be left out.

    pi      a!<z>.P + b?(x).Q + tau.R | (nu x) P | !P     (a! and a? are nullary)
    cmv+    lin x(l!true.P + l?(z).Q) | (new x y : T) P | if e then P else Q
    cmv     x!v.P | lin y?z.P | x<+l.P | x>>{l: P, m: Q}
    types   end | unit | bool | rec t.T | t | q +{l!T.U, ...} | q !T.U | q &{l: T, ...}
"""

COMMON = r"""
name: NAME | NUMERAL
label: NAME | MANGLED

NAME: /[A-Za-z_][A-Za-z0-9_']*/
NUMERAL: /[1-9][0-9]*/
MANGLED.2: /[A-Za-z_][A-Za-z0-9_']*\$(snd|rcv)/
COMMENT: /\/\/[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""

VALUES = r"""
?value: "true" -> true
      | "false" -> false
      | "unit" -> unit
      | name -> var

?expr: or_expr
?or_expr: and_expr ("or" and_expr)*
?and_expr: not_expr ("and" not_expr)*
?not_expr: "not" not_expr -> not_
         | value
         | "(" expr ")"
"""

TYPES = r"""
?type: atype
     | "rec" NAME "." type -> rec
     | qual pol atype "." type -> com_type

?atype: "end" -> end
      | "unit" -> unit_type
      | "bool" -> bool_type
      | NAME -> tvar
      | qual view "{" mix_tbranch ("," mix_tbranch)* "}" -> mix_choice_type
      | qual view "{" plain_tbranch ("," plain_tbranch)* "}" -> choice_type
      | "(" type ")"

mix_tbranch: label pol atype "." type
plain_tbranch: label ":" type

qual: "lin" -> lin
    | "un" -> un
view: "+" -> internal
    | "&" -> external
pol: "!" -> pol_out
   | "?" -> pol_in
"""

PI = r"""
start: process

?process: "(" "nu" name ")" process -> restrict
        | simple "|" process -> par
        | simple

?simple: "0" -> nil
       | summand ("+" summand)+ -> sum
       | summand -> single
       | "!" cont -> bang
       | "(" process ")"

?cont: "0" -> nil
     | summand -> single
     | "!" cont -> bang
     | "(" process ")"

summand: prefix ("." cont)?

prefix: name "!" "<" name ">" -> out
      | name "!" -> out_nullary
      | name "?" "(" name ")" -> inp
      | name "?" -> in_nullary
      | "tau" -> tau
""" + COMMON

SESSION_COMMON = r"""
start: process

?process: "(" "new" name name (":" type)? ")" process -> restrict
        | "if" expr "then" process "else" process -> ifte
        | simple "|" process -> par
        | simple

?cont: simple
"""

MIX = SESSION_COMMON + r"""
?simple: "0" -> nil
       | qual name "(" branch ("+" branch)* ")" -> choice
       | "(" process ")"

branch: label "!" value ("." cont)? -> out_branch
      | label "?" name ("." cont)? -> in_branch
      | label "?" "(" name ")" ("." cont)? -> in_branch
""" + VALUES + TYPES + COMMON

CMV = SESSION_COMMON + r"""
?simple: "0" -> nil
       | name "!" value ("." cont)? -> send
       | qual name "?" name ("." cont)? -> receive
       | qual name "?" "(" name ")" ("." cont)? -> receive
       | name "<+" label ("." cont)? -> select
       | name ">>" "{" offer_branch ("," offer_branch)* "}" -> offer
       | "(" process ")"

offer_branch: label ":" process
""" + VALUES + TYPES + COMMON

TYPE = r"""
start: type
""" + TYPES + COMMON
