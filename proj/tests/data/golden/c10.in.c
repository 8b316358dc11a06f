int list_len(void) {
    struct node *head = NULL;
    int n = 0;
    while (head) { n++; head = head->next; }
    return n;
}
