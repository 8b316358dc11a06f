public int twice(int v) {
    int result = v;
    result = result + v;
    return result;
}
