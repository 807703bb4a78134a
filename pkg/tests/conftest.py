import random

import pytest


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.module.__name__ == "test_acceptance":
        status = "PASS" if report.passed else "FAIL"
        print(f"\n[ACCEPTANCE] {status} {item.name}")

# The running-balance check pair: two solutions to the same exercise whose
# only logical difference is a missing bound check in the if condition.
WITHDRAW_CORRECT = """\
int main() {
    int n; float f;
    scanf("%d %f", &n, &f);
    if (n % 5 == 0 && n + 0.50 <= f)
        printf("%.2f", f - n - 0.50);
    else
        printf("%.2f", f);
    return 0;
}
"""

WITHDRAW_MISSING_CHECK = """\
int main() {
    int x; float y;
    scanf("%d %f", &x, &y);
    if ((x % 5) == 0)
        printf("%.2f", y - x - 0.50);
    else
        printf("%.2f", y);
    return 0;
}
"""

# Call chain main -> func1 -> func2 -> func3 -> func4 regardless of the
# order the definitions appear in.
CALL_CHAIN = """\
int func1() {
  int r = func2();
  return func4(r);
}

int func2() { return func3(); }

int func3() { return 2; }

int func4(int r) { return r - 2; }

int main() { return func1(); }
"""

HELPER1 = """\
int helper1(int a) {
    a = a + 2;
    a = a * 3;
    a = a - 4;
    return a;
}
"""

HELPER2 = """\
int helper2(int b) {
    int c;
    c = 0;
    while (b > 0) {
        b = b - 1;
        c = c + b;
    }
    return c;
}
"""

# Branch-swapped pair: first-use order reverses between the two programs
# while the helper bodies stay put.
BRANCH_SWAP_A = HELPER1 + HELPER2 + """\
int main() {
    int r;
    if (0)
        r = helper1(3);
    else
        r = helper2(3);
    return r;
}
"""

BRANCH_SWAP_B = HELPER1 + HELPER2 + """\
int main() {
    int r;
    if (1)
        r = helper2(3);
    else
        r = helper1(3);
    return r;
}
"""


@pytest.fixture
def withdraw_correct():
    return WITHDRAW_CORRECT


@pytest.fixture
def withdraw_missing_check():
    return WITHDRAW_MISSING_CHECK


@pytest.fixture
def rng():
    return random.Random(20240901)
