"""Recorded classroom results used as regression fixtures.

Three graded skeleton exercises: the national-income diagram (32 links) and
the two multiplier exercises (8 links each), plus the longitudinal records
of the ten students who completed all three. Expected display cells are the
published two-decimal percentages; stats footers use the sample (n-1)
standard deviation and cv = sd/mean.
"""

# exercise 1: national income, 32 links, 15 students
NATIONAL_INCOME_TOTAL = 32
NATIONAL_INCOME_DIRECTION = [0, 0, 3, 4, 0, 0, 17, 13, 16, 4, 6, 16, 15, 9, 10]
NATIONAL_INCOME_POLARITY = [15, 0, 3, 2, 13, 14, 22, 19, 21, 14, 11, 17, 13, 8, 6]
NATIONAL_INCOME_DIRECTION_CELLS = [
    "0.00%", "0.00%", "9.38%", "12.50%", "0.00%", "0.00%", "53.13%", "40.63%",
    "50.00%", "12.50%", "18.75%", "50.00%", "46.88%", "28.13%", "31.25%",
]
NATIONAL_INCOME_POLARITY_CELLS = [
    "46.88%", "0.00%", "9.38%", "6.25%", "40.63%", "43.75%", "68.75%", "59.38%",
    "65.63%", "43.75%", "34.38%", "53.13%", "40.63%", "25.00%", "18.75%",
]
# footer: mean / median / sd (sample) / cv at two-decimal display
NATIONAL_INCOME_DIRECTION_STATS = ("23.54", "18.75", "20.49", "0.87")
NATIONAL_INCOME_POLARITY_STATS = ("37.08", "40.63", "21.32", "0.57")

# exercise 2: purchases multiplier, 8 links, 13 students
PURCHASES_TOTAL = 8
PURCHASES_DIRECTION = [8, 7, 7, 7, 0, 7, 5, 5, 6, 8, 4, 6, 3]
PURCHASES_POLARITY = [6, 0, 6, 0, 3, 7, 8, 8, 8, 6, 1, 7, 7]
PURCHASES_DIRECTION_CELLS = [
    "100.00%", "87.50%", "87.50%", "87.50%", "0.00%", "87.50%", "62.50%",
    "62.50%", "75.00%", "100.00%", "50.00%", "75.00%", "37.50%",
]
PURCHASES_POLARITY_CELLS = [
    "75.00%", "0.00%", "75.00%", "0.00%", "37.50%", "87.50%", "100.00%",
    "100.00%", "100.00%", "75.00%", "12.50%", "87.50%", "87.50%",
]
PURCHASES_DIRECTION_STATS = ("70.19", "75.00", "28.20", "0.40")
PURCHASES_POLARITY_STATS = ("64.42", "75.00", "38.14", "0.59")

# exercise 3: tax multiplier, 8 links, 14 students
TAX_TOTAL = 8
TAX_DIRECTION = [8, 8, 4, 0, 8, 5, 8, 8, 8, 8, 5, 7, 8, 8]
TAX_POLARITY = [7, 8, 0, 0, 7, 7, 8, 7, 5, 8, 0, 5, 8, 8]
TAX_DIRECTION_CELLS = [
    "100.00%", "100.00%", "50.00%", "0.00%", "100.00%", "62.50%", "100.00%",
    "100.00%", "100.00%", "100.00%", "62.50%", "87.50%", "100.00%", "100.00%",
]
TAX_POLARITY_CELLS = [
    "87.50%", "100.00%", "0.00%", "0.00%", "87.50%", "87.50%", "100.00%",
    "87.50%", "62.50%", "100.00%", "0.00%", "62.50%", "100.00%", "100.00%",
]
TAX_DIRECTION_STATS = ("83.04", "100.00", "29.66", "0.36")
TAX_POLARITY_STATS = ("69.64", "87.50", "39.75", "0.57")

# the ten students who completed all three exercises: correct-answer counts
# per (exercise, column), keyed to the same student order in each list
COHORT_STUDENTS = [f"Student {i}" for i in (1, 3, 5, 6, 7, 8, 10, 11, 12, 15)]
COHORT_TOTALS = (32, 8, 8)
COHORT_DIRECTION = [
    [0, 3, 0, 0, 17, 13, 4, 6, 16, 10],
    [4, 3, 6, 6, 7, 5, 7, 7, 5, 8],
    [7, 8, 8, 8, 8, 5, 5, 8, 8, 4],
]
COHORT_POLARITY = [
    [15, 3, 13, 14, 22, 19, 14, 11, 17, 6],
    [1, 7, 8, 7, 6, 8, 0, 7, 8, 6],
    [5, 8, 5, 8, 7, 7, 0, 8, 8, 0],
]
# per-exercise footer displays for the cohort (mean, median, sd, cv)
COHORT_DIRECTION_STATS = [
    ("21.56", "15.63", "20.80", "0.96"),
    ("72.50", "75.00", "19.36", "0.27"),
    ("86.25", "100.00", "19.94", "0.23"),
]
COHORT_POLARITY_STATS = [
    ("41.88", "43.75", "17.75", "0.42"),
    ("72.50", "87.50", "36.23", "0.50"),
    ("70.00", "87.50", "39.62", "0.57"),
]
