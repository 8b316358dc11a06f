public boolean missing(Object candidate) {
assert(1 == 1);

    Object obj = null;
    obj = candidate;
    return obj == null;
}
