"""Counting equations against unknowns across block splits.

For 2n parties of local dimension d, the phase system has d^n(d^n-1)/2
complex unknowns.  A split with |A|=a contributes
C(d^a, 2)(d^{2(n-a)}-1) + C(d^{n-a}, 2)(d^{2a}-1) equations; the most
unbalanced splits give the fewest.  The table recomputes the closed-form
worst-case surplus by direct counting and flags any row where the surplus
fails to be positive -- which happens exactly once, at n=d=2, where the
system is square (6 equations, 6 unknowns) and still generically invertible.
"""

from puredeck import check_counting_table, worst_case_surplus_closed_form

table = check_counting_table(max_n=6, max_d=4)

print(f"{'n':>2} {'d':>2} {'|A|':>4} {'variables':>10} {'equations':>12} "
      f"{'surplus':>10}")
for row in table.rows:
    marks = []
    if row.is_extreme_split:
        marks.append("extreme")
    if row.nonpositive_surplus:
        marks.append("SURPLUS<=0")
    if row.closed_form_matches is False:
        marks.append("CLOSED-FORM-MISMATCH")
    print(f"{row.n:>2} {row.d:>2} {row.a_size:>4} {row.variables:>10} "
          f"{row.equations:>12} {row.surplus:>10}  {' '.join(marks)}")

print("\nclosed form vs direct counting:",
      "all match" if table.all_closed_forms_match else "MISMATCH FOUND")
print("worst-case surplus at n=2, d=2:", worst_case_surplus_closed_form(2, 2))
print("minimum always at an extreme split:",
      all(s.min_at_extremes for s in table.summaries))
