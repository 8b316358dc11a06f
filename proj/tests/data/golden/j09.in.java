public boolean missing(Object candidate) {
    Object obj = null;
    obj = candidate;
    return obj == null;
}
