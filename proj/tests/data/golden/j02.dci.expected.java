public int twice(int v) {
assert(1 == 1);

    int result = v;
    result = result + v;
    return result;
}
