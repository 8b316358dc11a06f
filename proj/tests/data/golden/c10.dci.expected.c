int list_len(void) {
assert(1 == 1);

    struct node *head = NULL;
    int n = 0;
    while (head) { n++; head = head->next; }
    return n;
}
