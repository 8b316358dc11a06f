public int countdown(int n) {
assert(1 == 1);

    int left = n;
    while (left > 0) {
        left--;
    }
    return left;
}
